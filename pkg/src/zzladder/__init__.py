"""Hard-core bosons with density-dependent Peierls phases on a zig-zag ladder.

Exact diagonalization, observables (currents, plaquette fluxes, fidelity),
quadratic mean-field bands, a four-site Gutzwiller ansatz, and the
three-atom dipolar microscopics behind the model.
"""

from .basis import BasisSector, ModelParams, build_sector
from .eigensolver import (ConvergenceError, SpectralResult, dense_spectrum,
                          lanczos_ground)
from .hamiltonian import (SparseOperator, apply, build_boson, build_fermion_jw,
                          build_parts, dump_operator, load_operator)
from .meanfield import BlochModel, bands, fermi_level, folded_crossing
from .observables import (ObservableReport, chi_order, compute_report, corr1,
                          current_divergence_check, current_nn, current_nnn,
                          density, fidelity, fidelity_subspace, g2,
                          plaquette_flux)
from .sweep import RunConfig, finite_size_scan, run_cut, run_point, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BasisSector", "ModelParams", "build_sector",
    "SparseOperator", "apply", "build_boson", "build_fermion_jw", "build_parts",
    "dump_operator", "load_operator",
    "ConvergenceError", "SpectralResult", "dense_spectrum", "lanczos_ground",
    "ObservableReport", "chi_order", "compute_report", "corr1",
    "current_divergence_check", "current_nn", "current_nnn", "density",
    "fidelity", "fidelity_subspace", "g2", "plaquette_flux",
    "BlochModel", "bands", "fermi_level", "folded_crossing",
    "RunConfig", "finite_size_scan", "run_cut", "run_point", "run_sweep",
]
