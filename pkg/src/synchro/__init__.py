"""Synchronous transducers: synchronization, the min Core monoid and core growth."""

from .algebra import (
    LevelTransformation,
    NormalForm,
    act_periodic,
    conjugate,
    fixed_letter_state,
    level_transformation,
    min_core,
    minimize,
    monoid_identity,
    monoid_product,
    normal_form,
    normal_form_power,
    omega_classes,
    omega_equivalent,
    power,
    product,
)
from .catalog import CatalogEntry, bisync_family, builtin, random_transducer
from .errors import SynchroError
from .growth import (
    GrowthSeries,
    classify_growth,
    dummy_active_state,
    dummy_active_state_closed_form,
    growth_series,
    level_drop,
    sigma,
    solve_exponent_prefix,
    verify_lower_bound,
)
from .sync import (
    SyncProfile,
    bisync_level,
    check_core_power_condition,
    core,
    core_dist,
    is_core,
    profile,
    sync_level,
    sync_map,
)
from .transducer import PeriodicWord, Transducer, dual, invert, parse, read_word, serialize

__all__ = [name for name in dir() if not name.startswith("_")]
