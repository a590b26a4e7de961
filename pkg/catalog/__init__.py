from catalog.loader import CatalogLoader, dump_catalog, load_catalog, load_catalog_text
from catalog.models import (
    AlgebraId,
    Catalog,
    CatalogEntry,
    CatalogError,
    CitedFact,
    ConstraintViolationError,
    Endpoint,
    IsoWitness,
    UnknownAlgebraError,
    evaluate_guard,
    expand_free_params,
)
from catalog.witnesses import WitnessMismatchError, WitnessResult, verify_all_witnesses, verify_witness

__all__ = [
    "AlgebraId",
    "Catalog",
    "CatalogEntry",
    "CatalogError",
    "CatalogLoader",
    "CitedFact",
    "ConstraintViolationError",
    "Endpoint",
    "IsoWitness",
    "UnknownAlgebraError",
    "WitnessMismatchError",
    "WitnessResult",
    "dump_catalog",
    "evaluate_guard",
    "expand_free_params",
    "load_catalog",
    "load_catalog_text",
    "verify_all_witnesses",
    "verify_witness",
]
