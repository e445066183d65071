"""Gate-count table for the benchmark gate set.

Static counts are pinned exactly under the little-endian qubit embedding;
adaptive counts may only improve on the listed values.
"""

import numpy as np
import pytest

from taqr.decomp import decompose_adaptive, decompose_static
from taqr.gateset import gate_from_name
from taqr.numkit import haar_random_unitary
from taqr.topo import bipartite_graph, build_static_scheme, line_graph, star_graph

GRAPHS = {"line": line_graph, "star": star_graph, "bipartite": lambda d: bipartite_graph(d, 2)}

# (static, adaptive) per gate and d
TABLE = {
    "line": {
        "x+1": ([3, 4, 5], [3, 4, 5]),
        "x-1": ([3, 4, 5], [3, 4, 5]),
        "qft": ([6, 10, 15], [6, 10, 15]),
        "random": ([6, 10, 15], [6, 10, 15]),
        "rxx": ([6], [6]), "rzz": ([0], [0]), "cz": ([0], [0]),
        "cx": ([3], [3]), "ch": ([3], [3]), "swap2q": ([1], [1]),
    },
    "star": {
        "x+1": ([5, 6, 9], [3, 4, 5]),
        "x-1": ([3, 4, 5], [3, 4, 5]),
        "qft": ([5, 10, 15], [6, 10, 15]),
        "random": ([6, 10, 15], [6, 10, 15]),
        "rxx": ([4], [4]), "rzz": ([0], [0]), "cz": ([0], [0]),
        "cx": ([3], [3]), "ch": ([3], [3]), "swap2q": ([3], [3]),
    },
    "bipartite": {
        "x+1": ([3, 6, 7], [3, 4, 5]),
        "x-1": ([3, 4, 5], [3, 4, 5]),
        "qft": ([6, 10, 14], [6, 10, 14]),
        "random": ([6, 10, 15], [6, 10, 15]),
        "rxx": ([2], [2]), "rzz": ([0], [0]), "cz": ([0], [0]),
        "cx": ([1], [1]), "ch": ([1], [1]), "swap2q": ([1], [1]),
    },
}

CASES = [
    (fam, gate, d, static, adaptive)
    for fam, rows in TABLE.items()
    for gate, (s_row, a_row) in rows.items()
    for d, static, adaptive in zip((4, 5, 6) if len(s_row) == 3 else (4,), s_row, a_row)
]


def _matrix(gate, d):
    if gate == "random":
        return haar_random_unitary(d, np.random.default_rng(d))
    return gate_from_name(gate, d, "little")


@pytest.mark.parametrize("fam,gate,d,static,adaptive", CASES, ids=lambda v: str(v))
def test_table(fam, gate, d, static, adaptive):
    g = GRAPHS[fam](d)
    U = _matrix(gate, d)
    assert decompose_static(U, build_static_scheme(g)).rotation_count == static
    assert decompose_adaptive(U, g).rotation_count <= adaptive


def test_big_endian_cx_is_one_transition_on_line():
    # with level = 2*q1 + q2, CX swaps levels 2 and 3, a single line edge
    U = gate_from_name("cx", 4, "big")
    assert decompose_static(U, build_static_scheme(line_graph(4))).rotation_count == 1
