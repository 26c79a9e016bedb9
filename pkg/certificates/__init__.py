try:
    from .registry import Certificate, CertificateContext, CertificateRegistry
    from .loader import load_certificates
except ImportError:
    from certificates.registry import Certificate, CertificateContext, CertificateRegistry
    from certificates.loader import load_certificates

__all__ = ['Certificate', 'CertificateContext', 'CertificateRegistry', 'load_certificates']
