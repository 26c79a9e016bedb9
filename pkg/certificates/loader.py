import importlib
import importlib.resources as importlib_resources
import logging

try:
    from .registry import Certificate, CertificateRegistry
except ImportError:
    from certificates.registry import Certificate, CertificateRegistry

logger = logging.getLogger(__name__)

SKIP = ('loader', 'registry')


def load_certificates(registry: CertificateRegistry = None) -> CertificateRegistry:
    """Register every module of this package that defines a `check` function."""
    registry = registry or CertificateRegistry()
    package_name = __package__ or "certificates"
    logger.debug(f"Scanning for certificates in package: {package_name}")

    for item_ref in sorted(importlib_resources.files(package_name).iterdir(), key=lambda ref: ref.name):
        if not (item_ref.is_file() and item_ref.name.endswith(".py")):
            continue
        file_stem = item_ref.name[:-3]
        if file_stem.startswith('_') or file_stem.startswith('test_') or file_stem in SKIP:
            continue

        try:
            module = importlib.import_module(f".{file_stem}", package=package_name)
        except ImportError as ie:
            logger.error(f"Import error while loading certificate '{file_stem}': {ie}", exc_info=True)
            continue

        if not hasattr(module, "check"):
            logger.debug(f"Module '{file_stem}' has no 'check' function, skipping")
            continue

        certificate = Certificate.from_module(module, default_name=file_stem)
        registry.register(certificate)
        logger.debug(f"Registered certificate: {certificate.name}")

    logger.debug(f"Loaded certificates: {registry.names()}")
    return registry
