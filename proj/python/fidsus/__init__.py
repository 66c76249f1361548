"""Fidelity susceptibility of the LMG, transverse-field Ising and Kitaev honeycomb models."""

from ._fidsus import (
    FidsusError,
    backend_ok,
    blas_core,
    classify_qad,
    fit_power_law,
    fs,
    inequality_bounds,
    ising_density_limit,
    ising_fs,
    kitaev_fs,
    kitaev_fs_density,
    kitaev_phase,
    lmg_fs,
    reproduce,
    scaling_relation,
)

if not backend_ok():
    # OpenBLAS picks its kernel when the library loads, so it cannot be fixed from here.
    raise ImportError(
        f"LAPACK eigensolver self-test failed (OpenBLAS core '{blas_core()}'); "
        "set OPENBLAS_CORETYPE=Haswell before starting Python"
    )

__all__ = [
    "FidsusError",
    "backend_ok",
    "blas_core",
    "classify_qad",
    "fit_power_law",
    "fs",
    "inequality_bounds",
    "ising_density_limit",
    "ising_fs",
    "kitaev_fs",
    "kitaev_fs_density",
    "kitaev_phase",
    "lmg_fs",
    "reproduce",
    "scaling_relation",
]
