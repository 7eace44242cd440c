# app/services/catalog/registry.py
import logging
import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List

from pydantic import ValidationError

from app.core.errors import UnknownModelError
from app.models.generators import GeneratorFamily, GeneratorId
from app.services.algebra.diffop2 import DiffOp
from app.services.catalog import modelbank

logger = logging.getLogger(__name__)

_GENERATOR_RE = re.compile(r"^gen\.(?P<family>[A-Za-z0-9]+)\.(?P<s>\d+)(?:\.(?P<index>\d+))?$")
_BLOCK_RE = re.compile(r"^k\.g2\.p(?P<p>[1-5])$")


class ModelRegistry:
    """Named model operators, built lazily and cached"""

    def __init__(self):
        self.builders: Dict[str, Callable[[], DiffOp]] = {
            "h.g2": modelbank.make_h_g2,
            "h.g2.w0": lambda: modelbank.make_h_g2(symbolic=False, omega=0),
            "x.g2": modelbank.make_x_g2,
            "k.g2": modelbank.make_k_g2,
            "k2.g2": modelbank.make_k_a2_squared_uv,
            "h.a2": modelbank.make_h_a2,
            "x.a2": modelbank.make_x_a2,
            "k.a2": modelbank.make_k_a2,
        }
        self._cache: Dict[str, DiffOp] = {}

    def names(self) -> List[str]:
        return sorted(self.builders) + [f"k.g2.p{p}" for p in range(1, 6)]

    def parse_generator(self, name: str, mark: Fraction = Fraction(0)) -> GeneratorId:
        match = _GENERATOR_RE.match(name)
        if not match:
            raise UnknownModelError(name)
        try:
            family = GeneratorFamily(match.group("family"))
            return GeneratorId(
                family=family,
                s=int(match.group("s")),
                index=int(match.group("index") or 0),
                n=mark,
            )
        except (ValueError, ValidationError):
            raise UnknownModelError(name)

    def resolve(self, name: str, mark: Fraction = Fraction(0)) -> DiffOp:
        """Look up an operator by name; raises UnknownModelError before any computation"""
        name = name.strip()
        if name.startswith("gen."):
            gid = self.parse_generator(name, mark)
            return modelbank.make_generator(gid)
        if name in self._cache:
            return self._cache[name]
        block = _BLOCK_RE.match(name)
        if block:
            operator = modelbank.make_k_block(int(block.group("p")))
        elif name in self.builders:
            logger.debug(f"Building model operator {name}")
            operator = self.builders[name]()
        else:
            raise UnknownModelError(name)
        self._cache[name] = operator
        return operator

    def validate(self, name: str) -> None:
        """Reject unknown names without building anything"""
        name = name.strip()
        if name.startswith("gen."):
            self.parse_generator(name)
        elif not (name in self.builders or _BLOCK_RE.match(name)):
            raise UnknownModelError(name)


@lru_cache(maxsize=1)
def get_registry() -> ModelRegistry:
    return ModelRegistry()
