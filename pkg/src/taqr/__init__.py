"""Transition-aware decomposition of single-qudit unitaries into native pulses."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .decomp import (
    VerificationReport,
    decompose,
    decompose_adaptive,
    decompose_static,
    eliminate_row,
    solve_elimination,
    swap_route_baseline,
    verify,
)
from .gateset import (
    embed_two_qubit,
    export_photonic,
    gate_from_name,
    make_ch,
    make_cx,
    make_cz,
    make_level_swap,
    make_qft,
    make_rxx,
    make_rzz,
    make_swap2q,
    make_x_shift,
    make_z,
)
from .numkit import (
    BeamSplitter,
    Phase,
    PulseSequence,
    Rotation,
    compose_pulses,
    frobenius_distance,
    haar_random_unitary,
    is_unitary,
    pulse_to_matrix,
    right_mix_columns,
)
from .topo import (
    EliminationScheme,
    TransitionGraph,
    bfs_layers,
    build_static_scheme,
    preset_graph,
    prune_for_row,
    removable_levels,
)
