"""Sum-rate-K and K-DoF conditions for two-hop K x K x K networks.

Indices in reports are 1-based, matching node names ``s_i``, ``u_j``, ``d_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bounds import eval_pair_bound
from .errors import SingularPattern, WrongField
from .exactalg import (
    ExactMatrix,
    SupportPattern,
    cofactor_submatrix,
    determinant,
    generic_rank,
    has_perfect_matching,
)
from .netmodel import EXPLICIT, CutPair, KkkNetwork
from .reports import BoundReport


@dataclass
class KkkVerdict:
    achieves_K: bool
    failed: list[dict] = field(default_factory=list)
    fallback_bound: int | None = None
    method: str = ""
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.achieves_K and self.failed:
            raise ValueError("a passing verdict cannot list failed conditions")

    def to_dict(self) -> dict:
        out = {"achieves_K": self.achieves_K, "failed": self.failed,
               "fallback_bound": self.fallback_bound, "method": self.method}
        if self.witness:
            out["witness"] = self.witness
        return out


def _verdict(K: int, failed: list[dict], method: str, witness=None) -> KkkVerdict:
    return KkkVerdict(not failed, failed, None if not failed else K - 1, method, witness or {})


def check_corollary2(net: KkkNetwork) -> KkkVerdict:
    """Necessary conditions for normalized sum capacity K.

    Both hops must be invertible and, for every (i, j),
    ``F(s_i,u_j) = 0 ⇔ det F(U∖u_j, D∖d_i) = 0`` (clause i) and
    ``F(u_j,d_i) = 0 ⇔ det F(S∖s_i, U∖u_j) = 0`` (clause ii).
    Over fields other than GF(2) passing does not certify achievability.
    """
    if net.mode != EXPLICIT:
        raise ValueError("check_corollary2 needs explicit gains; use check_theorem2 for supports")
    K, F1, F2 = net.K, net.F1, net.F2
    failed = []
    if determinant(F1) == 0:
        failed.append({"clause": "F(S,U) singular"})
    if determinant(F2) == 0:
        failed.append({"clause": "F(U,D) singular"})
    for i in range(K):
        for j in range(K):
            gain_zero = F1[j, i] == 0
            minor_zero = determinant(cofactor_submatrix(F2, i, j)) == 0
            if gain_zero != minor_zero:
                failed.append({"clause": "i", "i": i + 1, "j": j + 1})
    for i in range(K):
        for j in range(K):
            gain_zero = F2[i, j] == 0
            minor_zero = determinant(cofactor_submatrix(F1, j, i)) == 0
            if gain_zero != minor_zero:
                failed.append({"clause": "ii", "i": i + 1, "j": j + 1})
    return _verdict(K, failed, "corollary2")


def check_corollary3_gf2(net: KkkNetwork) -> KkkVerdict:
    """Over GF(2), sum rate K is achievable iff ``F(U,D) F(S,U) = I``.

    When it holds, every relay forwarding its received symbol is a witness.
    A failing verdict also carries the violated necessary conditions.
    """
    if net.field.kind != "prime" or net.field.p != 2:
        raise WrongField(f"check_corollary3_gf2 needs GF(2), network is over {net.field}")
    if (net.F2 @ net.F1).is_identity():
        return _verdict(net.K, [], "corollary3",
                        {"relay_map": "forward", "G": ExactMatrix.identity(net.K, net.field).to_lists()})
    failed = [{"clause": "F(U,D)F(S,U) != I"}] + check_corollary2(net).failed
    return _verdict(net.K, failed, "corollary3")


def _check_square_pair(support1: SupportPattern, support2: SupportPattern) -> int:
    if not (support1.is_square and support2.is_square and support1.rows == support2.rows):
        raise ValueError("supports must be square and of equal size")
    return support1.rows


def check_theorem2(support1: SupportPattern, support2: SupportPattern) -> KkkVerdict:
    """K DoF for almost all gains iff both hops are matched and, for all (i, j),
    ``(s_i,u_j) ∈ E ⇔ U∖u_j, D∖d_i matched`` and ``(u_j,d_i) ∈ E ⇔ S∖s_i, U∖u_j matched``."""
    K = _check_square_pair(support1, support2)
    failed = []
    if not has_perfect_matching(support1):
        failed.append({"clause": "F(S,U) generically singular"})
    if not has_perfect_matching(support2):
        failed.append({"clause": "F(U,D) generically singular"})
    for i in range(K):
        for j in range(K):
            if bool(support1[j, i]) != has_perfect_matching(support2.drop(i, j)):
                failed.append({"clause": "i", "i": i + 1, "j": j + 1})
    for i in range(K):
        for j in range(K):
            if bool(support2[i, j]) != has_perfect_matching(support1.drop(j, i)):
                failed.append({"clause": "ii", "i": i + 1, "j": j + 1})
    return _verdict(K, failed, "theorem2")


def generic_inverse_pattern(support: SupportPattern) -> SupportPattern:
    """Zero pattern of the inverse for almost all gains.

    Entry (i, j) of the inverse is the (j, i) cofactor over the determinant,
    so it is generically nonzero iff deleting row j and column i leaves a
    perfectly matchable pattern.
    """
    if not has_perfect_matching(support):
        raise SingularPattern("pattern has no perfect matching")
    n = support.rows
    return SupportPattern.from_rows(
        [[int(has_perfect_matching(support.drop(j, i))) for j in range(n)] for i in range(n)], cols=n)


@dataclass(frozen=True)
class DiagonalizableReport:
    diagonalizable: bool
    inverse1: SupportPattern
    inverse2: SupportPattern
    mismatches: tuple

    def __bool__(self):
        return self.diagonalizable

    def to_dict(self) -> dict:
        return {"diagonalizable": self.diagonalizable,
                "inverse_F_SU": [list(r) for r in self.inverse1.bits],
                "inverse_F_UD": [list(r) for r in self.inverse2.bits],
                "mismatches": [dict(m) for m in self.mismatches]}


def check_diagonalizable(support1: SupportPattern, support2: SupportPattern) -> DiagonalizableReport:
    """``F(S,U)⁻¹`` must share zeros with ``F(U,D)`` and ``F(U,D)⁻¹`` with ``F(S,U)``."""
    K = _check_square_pair(support1, support2)
    inv1 = generic_inverse_pattern(support1)
    inv2 = generic_inverse_pattern(support2)
    mismatches = []
    for a in range(K):
        for b in range(K):
            if inv1[a, b] != support2[a, b]:
                mismatches.append({"pair": "inv(F_SU) vs F_UD", "row": a + 1, "col": b + 1})
            if inv2[a, b] != support1[a, b]:
                mismatches.append({"pair": "inv(F_UD) vs F_SU", "row": a + 1, "col": b + 1})
    return DiagonalizableReport(not mismatches, inv1, inv2, tuple(mismatches))


def adjacent_cell_network(K: int) -> KkkNetwork:
    """Tridiagonal connectivity ``|i - j| <= 1`` on both hops."""
    if K < 1:
        raise ValueError("K must be >= 1")
    band = SupportPattern.banded(K, 1)
    return KkkNetwork.from_supports(band, band)


def adjacent_cell_sets(K: int) -> tuple[list[int], list[int]]:
    """Index sets A = {1,2} ∪ {5..8} ∪ {11..14} ∪ ... and B = {1} ∪ {6,7} ∪ {12,13} ∪ ...
    intersected with {1..K}."""
    A = [i for i in range(1, K + 1) if (i + 1) % 6 in (0, 1, 2, 3)]
    B = [i for i in range(1, K + 1) if i % 6 in (0, 1)]
    return A, B


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def adjacent_cell_dof(K: int) -> BoundReport:
    """Evaluate the converse cut Ω = S ∪ U ∪ d_B, Θ = s_B ∪ u_A with generic ranks."""
    net = adjacent_cell_network(K)
    layered = net.to_layered()
    A, B = adjacent_cell_sets(K)
    Bc = [i for i in range(1, K + 1) if i not in B]
    omega = [f"s{i}" for i in range(1, K + 1)] + [f"u{i}" for i in range(1, K + 1)] + [f"d{i}" for i in B]
    theta = [f"s{i}" for i in B] + [f"u{i}" for i in A]
    report = eval_pair_bound(layered, CutPair(omega, theta))

    cross = generic_rank(net.support2.submatrix([i - 1 for i in Bc], [a - 1 for a in A]))
    expected = {
        "dof": _ceil_div(2 * K, 3),
        "A_plus_Bc": K + (K + 1) // 3,
        "cross_rank": _ceil_div(2 * (K - 1), 3),
    }
    report.method = "adjacent-cell"
    report.stats = {
        "K": K,
        "A": A,
        "B": B,
        "A_plus_Bc": len(A) + len(Bc),
        "cross_rank": cross,
        "expected": expected,
        "matches_formula": (report.value == expected["dof"]
                            and len(A) + len(Bc) == expected["A_plus_Bc"]
                            and cross == expected["cross_rank"]),
    }
    if not report.stats["matches_formula"]:
        raise RuntimeError(f"adjacent-cell cut disagrees with the closed form at K={K}: {report.stats}")
    return report
