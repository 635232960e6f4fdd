"""Instance documents

An instance is a JSON object describing a system ``(J, [I_1, …, I_d], N = U/L)`` over named variables, e.g.::

    {
      "variables": ["x", "y"],
      "J": ["x", "y"],
      "ideals": [["x", "y"]],
      "module": {"U": ["1"], "L": ["x^2"]},
      "options": {"offset": 1, "cap": 64, "window": 3},
      "verify": {"u": [3], "candidates": ["x"], "v": 1}
    }

Monomials are written as strings like ``"x^2*y"`` or as exponent arrays like ``[2, 1]``.
Only ``variables`` and ``J`` are required. Generated instances also record the corpus ``seed`` they were drawn from.
"""

from pathlib import Path
from typing import Self

from pydantic import BaseModel, ConfigDict, Field

from .hilbert import FitOptions, MultiIdealSystem
from .monomial import MonomialIdeal, MonomialSubquotient, VariableContext
from .sequence import ElementCandidate

MonomialEntry = str | list[int]


class ModuleDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    upper: list[MonomialEntry] = Field(default_factory=lambda: ["1"], alias="U")
    lower: list[MonomialEntry] = Field(default_factory=list, alias="L")


class VerifyDocument(BaseModel):
    """Extra arguments of the verifiers that need more than the system"""

    model_config = ConfigDict(extra="forbid")

    u: list[int] | None = None
    l_prime: list[MonomialEntry] | None = None
    candidates: list[MonomialEntry] = Field(default_factory=list)
    index: int | None = None
    v: int = Field(default=1, ge=0)


class InstanceDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    variables: list[str]
    primary: list[MonomialEntry] = Field(alias="J")
    ideals: list[list[MonomialEntry]] = Field(default_factory=list)
    module: ModuleDocument = Field(default_factory=ModuleDocument)
    options: FitOptions = Field(default_factory=FitOptions)
    verify: VerifyDocument = Field(default_factory=VerifyDocument)
    seed: int | None = None

    @property
    def context(self) -> VariableContext:
        return VariableContext(self.variables)

    def ideal(self, entries: list[MonomialEntry]) -> MonomialIdeal:
        return self.context.ideal(*entries)

    def to_system(self) -> MultiIdealSystem:
        return MultiIdealSystem(
            self.ideal(self.primary),
            [self.ideal(entries) for entries in self.ideals],
            MonomialSubquotient(self.ideal(self.module.upper), self.ideal(self.module.lower)),
        )

    def lower_prime(self) -> MonomialIdeal | None:
        return None if self.verify.l_prime is None else self.ideal(self.verify.l_prime)

    def candidates(self, system: MultiIdealSystem) -> list[ElementCandidate]:
        return [ElementCandidate.parse(system, entry, self.verify.index) for entry in self.verify.candidates]

    @classmethod
    def from_system(
        cls,
        system: MultiIdealSystem,
        options: FitOptions | None = None,
        verify: VerifyDocument | None = None,
        seed: int | None = None,
    ) -> Self:
        return cls(
            variables=list(system.context.names),
            primary=system.primary.to_strings(),
            ideals=[ideal.to_strings() for ideal in system.ideals],
            module=ModuleDocument(upper=system.module.upper.to_strings(), lower=system.module.lower.to_strings()),
            options=options or FitOptions(),
            verify=verify or VerifyDocument(),
            seed=seed,
        )

    @classmethod
    def load(cls, path: Path) -> Self:
        return cls.model_validate_json(path.read_text())

    def dump(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2) + "\n"
