from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

PASS = "PASS"
FAIL = "FAIL"


@dataclass
class CertificateContext:
    """Everything a certificate may recompute from: the run config and the persisted alpha."""
    config: Any
    alpha: Any
    translation_set: Any = None


class Certificate:
    def __init__(self, name: str, description: str, parameters: Dict[str, Any], check_fn: Callable = None, emoji: Optional[str] = None):
        self.name = name
        self.description = description
        self.parameters = parameters
        self.check_fn = check_fn
        self.emoji = emoji

    def run(self, context: CertificateContext, arguments: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        result = self.check_fn(context, arguments or {})
        if result.get("verdict") not in (PASS, FAIL):
            raise ValueError(f"Certificate '{self.name}' returned no PASS/FAIL verdict")
        return result

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "emoji": self.emoji,
            "description": self.description,
            "parameters": self.parameters
        }

    @classmethod
    def from_module(cls, module, default_name: str = None):
        return cls(
            name=getattr(module, "name", default_name),
            description=getattr(module, "description", "No description provided."),
            parameters=getattr(module, "parameters", {"type": "object", "properties": {}}),
            check_fn=module.check,
            emoji=getattr(module, "emoji", None)
        )


class CertificateRegistry:
    def __init__(self):
        self._certificates: Dict[str, Certificate] = {}

    def register(self, certificate: Certificate):
        self._certificates[certificate.name] = certificate

    def get(self, name: str) -> Optional[Certificate]:
        return self._certificates.get(name)

    def names(self) -> List[str]:
        return sorted(self._certificates)

    def all_certificates(self) -> List[Certificate]:
        return [self._certificates[name] for name in self.names()]

    def run(self, name: str, context: CertificateContext, arguments: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        certificate = self.get(name)
        if certificate is None:
            raise ValueError(f"Certificate {name} not found")
        return certificate.run(context, arguments)
