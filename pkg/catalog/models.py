from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Mapping, Optional, Sequence, Union

from algebra.identities import is_jordan
from algebra.tensor import StructureTensor
from scalars.errors import InputError, UnboundParameterError
from scalars.field import ExactScalar
from scalars.parser import Binding, format_scalar, free_names, parse_constant, parse_scalar_expr, tokenize
from scalars.poly import RatFunc

logger = logging.getLogger(__name__)


class CatalogError(InputError):
    pass


class UnknownAlgebraError(InputError):
    pass


class ConstraintViolationError(InputError):
    pass


def evaluate_guard(text: str, bindings: Mapping[str, Binding]) -> bool:
    """Evaluate 'lhs == rhs' / 'lhs != rhs' clauses joined by 'and'.

    With rational-function bindings, '!=' means 'not identically equal'.
    """
    for clause in text.split(" and "):
        if "!=" in clause:
            lhs, rhs = clause.split("!=", 1)
            want_equal = False
        elif "==" in clause:
            lhs, rhs = clause.split("==", 1)
            want_equal = True
        else:
            raise CatalogError(f"Guard clause needs '==' or '!=': {clause!r}")
        equal = (parse_scalar_expr(lhs, bindings) - parse_scalar_expr(rhs, bindings)).is_zero()
        if equal != want_equal:
            return False
    return True


@dataclass(frozen=True)
class ParamSpec:
    name: str
    excluded: tuple[str, ...] = ()


@dataclass(frozen=True)
class Product:
    """e_i e_j contributes coeff * e_k; indices are 1-based as printed."""

    i: int
    j: int
    k: int
    coeff: str


@dataclass(frozen=True)
class Expectation:
    values: Mapping[str, object]
    when: Optional[str] = None


@dataclass(frozen=True)
class Variance:
    """A printed invariant that the computation does not reproduce, kept on record."""

    field: str
    printed: object
    computed: object
    note: str = ""

    def explains(self, value: object) -> bool:
        return _same(self.computed, value)


@dataclass(frozen=True)
class AlgebraId:
    label: str
    params: tuple[tuple[str, ExactScalar], ...] = ()

    @classmethod
    def of(cls, label: str, params: Optional[Mapping[str, object]] = None) -> AlgebraId:
        bound = tuple(
            (name, value if isinstance(value, ExactScalar) else parse_constant(str(value)))
            for name, value in (params or {}).items()
        )
        return cls(label, bound)

    @property
    def bindings(self) -> dict[str, ExactScalar]:
        return dict(self.params)

    @property
    def key(self) -> str:
        if not self.params:
            return self.label
        inner = ",".join(f"{name}={format_scalar(value).replace(' ', '')}" for name, value in self.params)
        return f"{self.label}({inner})"

    def __str__(self) -> str:
        return self.key


@dataclass
class CatalogEntry:
    """One printed row: a single algebra or a parametrized family."""

    label: str
    dim: int
    table: str
    products: tuple[Product, ...]
    params: tuple[ParamSpec, ...] = ()
    constraints: tuple[str, ...] = ()
    expected: tuple[Expectation, ...] = ()
    samples: tuple[Mapping[str, str], ...] = ()
    summands: tuple[str, ...] = ()
    family_node: Optional[str] = None
    display: Optional[str] = None
    variances: tuple[Variance, ...] = ()
    source_file: Optional[str] = field(default=None, compare=False)

    @property
    def is_family(self) -> bool:
        return bool(self.params)

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def check_bindings(self, bindings: Mapping[str, Binding], allow_excluded: bool = False) -> None:
        names = set(bindings)
        missing = [n for n in self.param_names if n not in names]
        if missing:
            raise UnboundParameterError(missing[0])
        if allow_excluded:
            return
        for spec in self.params:
            value = RatFunc.coerce(bindings[spec.name])
            for excluded in spec.excluded:
                if (value - parse_scalar_expr(excluded)).is_zero():
                    raise ConstraintViolationError(
                        f"{self.label}: {spec.name} = {excluded} is excluded"
                    )
        for constraint in self.constraints:
            if not evaluate_guard(constraint, bindings):
                raise ConstraintViolationError(f"{self.label}: constraint {constraint!r} fails")

    def tensor(self, bindings: Optional[Mapping[str, Binding]] = None,
               allow_excluded: bool = False) -> StructureTensor:
        """Instantiate the table; RatFunc bindings give a tensor over RatFunc."""
        bindings = dict(bindings or {})
        self.check_bindings(bindings, allow_excluded)
        bindings = {name: bindings[name] for name in self.param_names}
        values = {}
        for p in self.products:
            values[(p.i - 1, p.j - 1, p.k - 1)] = parse_scalar_expr(p.coeff, bindings)
        symbolic = any(not v.is_constant for v in values.values())
        domain = RatFunc if symbolic else ExactScalar
        table: dict[tuple[int, int], dict[int, object]] = {}
        for (i, j, k), v in values.items():
            key = (min(i, j), max(i, j))
            table.setdefault(key, {})[k] = v if symbolic else v.constant_value()
        return StructureTensor.from_products(self.dim, table, domain)

    def sample_ids(self) -> list[AlgebraId]:
        if not self.is_family:
            return [AlgebraId(self.label)]
        return [
            AlgebraId.of(self.label, {name: sample[name] for name in self.param_names})
            for sample in self.samples
        ]

    def variance_for(self, name: str, printed: object) -> Optional[Variance]:
        for variance in self.variances:
            if variance.field == name and _same(variance.printed, printed):
                return variance
        return None

    def expected_for(self, bindings: Mapping[str, Binding]) -> dict[str, object]:
        resolved: dict[str, object] = {}
        for expectation in self.expected:
            if expectation.when is None or evaluate_guard(expectation.when, bindings):
                resolved.update(expectation.values)
        return resolved


def _same(recorded: object, value: object) -> bool:
    if isinstance(value, tuple) and isinstance(recorded, list):
        recorded = tuple(recorded)
    return recorded == value


@dataclass(frozen=True)
class Endpoint:
    """Catalog label plus parameter expressions in the free parameters (and t)."""

    label: str
    params: Mapping[str, str] = field(default_factory=dict)

    def bind(self, free: Mapping[str, Binding]) -> dict[str, RatFunc]:
        return {name: parse_scalar_expr(expr, free) for name, expr in self.params.items()}

    def algebra_id(self, free: Mapping[str, Binding]) -> AlgebraId:
        bound = {}
        for name, value in self.bind(free).items():
            if not value.is_constant:
                raise InputError(f"{self.label}: parameter {name} depends on t")
            bound[name] = value.constant_value()
        return AlgebraId(self.label, tuple(bound.items()))

    def varies(self) -> bool:
        """True when a parameter depends on a free parameter or on t."""
        return any(free_names(expr) or "t" in _names(expr) for expr in self.params.values())

    def depends_on_t(self) -> bool:
        return any("t" in _names(expr) for expr in self.params.values())


def _names(expr: str) -> set[str]:
    return {tok.value for tok in tokenize(str(expr)) if tok.kind == "name"}


def expand_free_params(free_params: Mapping[str, Sequence[str]]) -> list[dict[str, ExactScalar]]:
    """Cartesian product of the sample lists; [{}] when there are none."""
    if not free_params:
        return [{}]
    names = list(free_params)
    return [
        {name: parse_constant(str(value)) for name, value in zip(names, combo)}
        for combo in cartesian(*(free_params[name] for name in names))
    ]


@dataclass(frozen=True)
class IsoWitness:
    id: str
    source: Endpoint
    target: Endpoint
    matrix: tuple[tuple[str, ...], ...]
    free_params: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    allow_excluded: bool = False
    note: Optional[str] = None


@dataclass(frozen=True)
class CitedFact:
    separates: tuple[str, str]
    reason: str


@dataclass
class Catalog:
    entries: dict[str, CatalogEntry] = field(default_factory=dict)
    witnesses: list[IsoWitness] = field(default_factory=list)
    cited: list[CitedFact] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, label: str) -> CatalogEntry:
        try:
            return self.entries[label]
        except KeyError:
            raise UnknownAlgebraError(f"Unknown algebra: {label}") from None

    def make_id(self, label: str, values: Mapping[str, object]) -> AlgebraId:
        """AlgebraId with parameters in the row's declared order."""
        entry = self.get(label)
        unknown = set(values) - set(entry.param_names)
        if unknown:
            raise ConstraintViolationError(f"{label}: unknown parameters {sorted(unknown)}")
        return AlgebraId.of(label, {name: values[name] for name in entry.param_names if name in values})

    def resolve(self, endpoint: Endpoint, free: Mapping[str, Binding]) -> AlgebraId:
        return self.make_id(endpoint.label, endpoint.algebra_id(free).bindings)

    def by_table(self, table: str) -> list[CatalogEntry]:
        return [e for e in self.entries.values() if e.table == table]

    def instantiate(self, algebra: Union[AlgebraId, str], allow_excluded: bool = False) -> StructureTensor:
        if isinstance(algebra, str):
            algebra = AlgebraId(algebra)
        return self.get(algebra.label).tensor(algebra.bindings, allow_excluded)

    def expected_invariants(self, algebra: Union[AlgebraId, str]) -> dict[str, object]:
        if isinstance(algebra, str):
            algebra = AlgebraId(algebra)
        entry = self.get(algebra.label)
        entry.check_bindings(algebra.bindings)
        return entry.expected_for(algebra.bindings)

    def sample_ids(self, tables: Optional[Sequence[str]] = None) -> list[AlgebraId]:
        ids = []
        for entry in self.entries.values():
            if tables is None or entry.table in tables:
                ids.extend(entry.sample_ids())
        return ids

    def with_samples(self, overrides: Mapping[str, Sequence[Mapping[str, str]]]) -> Catalog:
        for label, samples in overrides.items():
            entry = self.get(label)
            entry.samples = tuple(dict(s) for s in samples)
            for sample in entry.samples:
                entry.check_bindings({k: parse_constant(str(v)) for k, v in sample.items()})
        return self

    def validate(self) -> None:
        """Every table at every sample must be commutative and Jordan."""
        for entry in self.entries.values():
            for algebra in entry.sample_ids():
                tensor = self.instantiate(algebra)
                if not is_jordan(tensor):
                    raise CatalogError(f"{algebra} from {entry.source_file} is not a Jordan algebra")
