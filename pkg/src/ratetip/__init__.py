"""Critical-rate / weak-tracking analysis of the parameter-shifted Rossler system."""

from .integrate import IntegratorConfig, integrate, integrate_with_events
from .poincare import CrossingRecord, Section, SectionPoint, detect_crossings, return_map
from .shift import ShiftKind, ShiftProfile, eval_shift, shift_derivative, tau_threshold
from .system import (
    NonautonomousSpec,
    RosslerParams,
    equilibria,
    inner_equilibrium,
    vector_field_frozen,
    vector_field_nonautonomous,
)
from .tracking import (
    ConfirmConfig,
    CriticalRate,
    Fate,
    FateClass,
    GapMode,
    GapResult,
    PullbackRunConfig,
    RefineConfig,
    classify_fate,
    confirm_weak_tracking,
    find_critical_rates,
    gap,
    pullback_final_crossing,
    scan_eta,
    weak_tracking_feasible,
)
from .upo import PeriodicOrbit, find_fixed_point, locate_period_doubling, seed_guess_from_recurrence

__version__ = "0.1.0"
