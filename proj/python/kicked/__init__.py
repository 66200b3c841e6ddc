"""Simulation and analysis of kicked sequential dynamical systems.

Thin wrapper around the compiled module: Weyl sums and discrepancy on the
torus, transfer-matrix recursions in PSL(2,R), quasi-morphisms from bounded
one-forms on the hyperbolic plane, and kicked-top / flat-torus experiments.
"""

from kicked._kicked import (  # noqa: F401
    __version__,
    burago_scan,
    discrepancy_1d,
    escape_detector,
    evolve_unipotent,
    flat_birkhoff,
    gauge_growth_slope,
    interval_cover,
    mean_square_weyl,
    measure_of_ac,
    nonmixing_witness,
    qm_hyperbolic,
    qm_parabolic,
    schrodinger_solve,
    super_recurrence_thresholds,
    time_reversal_check,
    top_orbit_z_drift,
    trace_polynomial,
    weyl_sum,
)
