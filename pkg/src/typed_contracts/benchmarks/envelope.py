"""Agent utility under linear contracts as a function of the share alpha.

For each type the best-response utility ``max_i alpha*R_i - c_i`` is the upper
envelope of n lines; the expected utility U(alpha) is their weighted sum, a
convex piecewise-linear function.  Breakpoints are where some type switches
action, always to a strictly steeper line (the principal prefers higher
expected reward at a tie while alpha < 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..instance import Instance


@dataclass(frozen=True)
class Breakpoint:
    alpha: object
    type_index: int
    from_action: int
    to_action: int
    slope_jump: object  # w_t * (R_new - R_old)
    drop: object  # w_t * (c_new - c_old)
    W: object  # slope of U right of the breakpoint
    D: object  # U(alpha) = W*alpha - D right of the breakpoint

    @property
    def V(self):
        return self.W - self.D


@dataclass(frozen=True)
class UtilityEnvelope:
    base_slope: object  # W_0
    base_drop: object  # D_0
    breakpoints: tuple
    start_actions: tuple  # per-type best response at alpha = 0

    def _segment(self, alpha):
        W, D = self.base_slope, self.base_drop
        for bp in self.breakpoints:
            if bp.alpha <= alpha:
                W, D = bp.W, bp.D
            else:
                break
        return W, D

    def value(self, alpha):
        W, D = self._segment(alpha)
        return W * alpha - D

    def slope(self, alpha):
        """Right derivative of U at ``alpha``."""
        return self._segment(alpha)[0]

    def segments(self) -> tuple:
        """``(alpha_start, W, D)`` for each linear piece, starting at 0."""
        zero = Fraction(0) if not isinstance(self.base_slope, float) else 0.0
        out = [(zero, self.base_slope, self.base_drop)]
        for bp in self.breakpoints:
            if bp.alpha == out[-1][0]:
                out[-1] = (bp.alpha, bp.W, bp.D)
            else:
                out.append((bp.alpha, bp.W, bp.D))
        return tuple(out)

    def __len__(self):
        return len(self.breakpoints)


def _type_chain(R, c, tol):
    """Actions of one type along alpha in [0, 1] and the switch points."""
    n = len(R)
    # at alpha = 0: max -c, then steepest, then lowest index
    cur = min(range(n), key=lambda i: (c[i], -R[i], i))
    start = cur
    chain = []
    alpha = None
    while True:
        best = None
        for i in range(n):
            dR = R[i] - R[cur]
            if dR <= tol:
                continue
            a = (c[i] - c[cur]) / dR
            if alpha is not None and a < alpha - tol:
                continue  # cannot happen for an exact envelope; guards float noise
            if a > 1 + tol:
                continue
            if best is None or a < best[0] - tol or (abs(a - best[0]) <= tol and R[i] > R[best[1]] + tol):
                best = (a, i)
        if best is None:
            return start, chain
        a, nxt = best
        if a < 0:
            a = a * 0
        chain.append((a, cur, nxt))
        alpha, cur = a, nxt


def utility_envelope(instance: Instance) -> UtilityEnvelope:
    R = instance.reward_table
    tol = instance.tolerance
    w = instance.weights
    zero = Fraction(0) if instance.is_exact else 0.0
    W = D = zero
    raw = []
    starts = []
    for t in range(instance.num_types):
        c = instance.costs[t]
        start, chain = _type_chain(R[t], c, tol)
        starts.append(start)
        W += w[t] * R[t][start]
        D += w[t] * c[start]
        for k, (a, i, j) in enumerate(chain):
            raw.append((a, t, k, i, j, w[t] * (R[t][j] - R[t][i]), w[t] * (c[j] - c[i])))
    raw.sort(key=lambda e: (e[0], e[1], e[2]))
    base_W, base_D = W, D
    bps = []
    for a, t, _, i, j, dw, dd in raw:
        W += dw
        D += dd
        bps.append(Breakpoint(a, t, i, j, dw, dd, W, D))
    return UtilityEnvelope(base_W, base_D, tuple(bps), tuple(starts))
