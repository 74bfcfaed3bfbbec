"""Damped best-response learning for the miner and the betting user.

Each step of length ``h = -log(1 - damping)`` integrates the continuous
best-response flow ``x' = BR(y) - x`` exactly: between switches of either
player's best response the flow moves each player the fraction ``damping``
toward its best response, as a plain damped update would.  When an
opponent's best response would switch in the middle of a step, the step is
split at the switching time, so no player overshoots a switching line.
Naive fixed-fraction updates keep cycling around the mixed equilibrium at an
amplitude of order ``damping``.  The split flow does not.

Both payoffs are bilinear in the mixed strategies, so the game is the 3x3
bimatrix of pure-strategy payoffs (pure order: honest/abstain, D, not-D),
built once from ``payoffs`` and evaluated in closed form afterwards.

On a knife edge a player's best response is a face of its simplex; the
selected element is the one the player would move toward an instant later
given where the opponent is heading, and a player already inside its
best-response face stays put.

Near a mixed equilibrium the exact flow spirals in with switches piling up
faster than time advances.  Once a step has seen ``CHATTER_EVENTS`` switches
and both players keep alternating within the same two pure strategies, the
rest of the step heads for the equilibrium of that 2x2 sub-game, which is
the time average of the alternating best responses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import GameParameters, MinerStrategy, UserStrategy
from .errors import DomainError
from .payoffs import miner_payoff_values, user_payoff_values

_PURE = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))
MAX_EVENTS = 2_000_000
CHATTER_EVENTS = 64
_CHATTER_WINDOW = 16


@dataclass
class DynamicsTrace:
    iterates: list[tuple[MinerStrategy, UserStrategy]] = field(default_factory=list)
    converged: bool = False
    events: int = 0

    @property
    def final_point(self) -> tuple[MinerStrategy, UserStrategy]:
        return self.iterates[-1]

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1


def payoff_bimatrix(params: GameParameters):
    """``(user_rows, miner_rows)`` with ``user_rows[i][j]`` the user's payoff
    for user pure ``i`` against miner pure ``j``, and ``miner_rows[i][j]`` the
    miner's payoff for miner pure ``i`` against user pure ``j``."""
    user_rows = [[float(user_payoff_values(li[0], li[1], wj[0], wj[1], params))
                  for wj in _PURE] for li in _PURE]
    miner_rows = [[float(miner_payoff_values(lj[0], lj[1], wi[0], wi[1], params))
                   for lj in _PURE] for wi in _PURE]
    return user_rows, miner_rows


def _values(rows, y):
    """Payoff of each pure strategy against the opponent mix ``y = (y_d, y_n)``."""
    y0 = 1.0 - y[0] - y[1]
    return [r[0] * y0 + r[1] * y[0] + r[2] * y[1] for r in rows]


def _best(vals, tie):
    top = max(vals)
    return [i for i, v in enumerate(vals) if v >= top - tie]


def _project(face, x):
    """Nearest point to ``x`` in the face spanned by the given pure strategies."""
    if len(face) == 3:
        return x
    if len(face) == 1:
        return _PURE[face[0]]
    a, b = _PURE[face[0]], _PURE[face[1]]
    dx, dy = b[0] - a[0], b[1] - a[1]
    t = ((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / (dx * dx + dy * dy)
    t = min(1.0, max(0.0, t))
    return (a[0] + t * dx, a[1] + t * dy)


def _targets(w, l, user_rows, miner_rows, tie):
    uv, mv = _values(user_rows, w), _values(miner_rows, l)
    bu, bm = _best(uv, tie), _best(mv, tie)
    lt, wt = _project(bu, l), _project(bm, w)
    # break ties by where the opponent is heading
    if len(bu) > 1:
        ahead = _values(user_rows, wt)
        sub = _best([ahead[i] for i in bu], tie)
        lt = _project([bu[i] for i in sub], l)
    if len(bm) > 1:
        ahead = _values(miner_rows, lt)
        sub = _best([ahead[i] for i in bm], tie)
        wt = _project([bm[i] for i in sub], w)
    return wt, lt, bu, bm


def _first_switch(rows, best, y0, yt, u_end, tie):
    """Largest ``u`` in ``(u_end, 1)`` where another pure strategy overtakes a best one."""
    v0, vt = _values(rows, y0), _values(rows, yt)
    found = u_end
    for a in best:
        for b in range(3):
            if b in best:
                continue
            d0, dt = v0[a] - v0[b], vt[a] - vt[b]
            if d0 > tie and dt < 0.0:
                u = dt / (dt - d0)
                if u_end < u < 1.0:
                    found = max(found, u)
    return found


def _indifference_weight(rows, keep, other):
    """Weight on ``other[1]`` making the owner of ``rows`` indifferent within ``keep``."""
    a, b = keep
    lo = rows[a][other[0]] - rows[b][other[0]]
    hi = rows[a][other[1]] - rows[b][other[1]]
    if lo == hi:
        return None
    q = lo / (lo - hi)
    return q if 0.0 <= q <= 1.0 else None


def _as_point(support, q):
    mix = [0.0, 0.0, 0.0]
    mix[support[0]] += 1.0 - q
    mix[support[1]] += q
    return (mix[1], mix[2])


def _support_equilibrium(user_rows, miner_rows, su, sm, tie):
    """Equilibrium ``(w, l)`` of the game restricted to supports ``sm`` x ``su``.

    ``None`` unless it exists and no outside pure strategy beats the support.
    """
    if len(su) != 2 or len(sm) != 2:
        return None
    q = _indifference_weight(user_rows, su, sm)
    r = _indifference_weight(miner_rows, sm, su)
    if q is None or r is None:
        return None
    w, l = _as_point(sm, q), _as_point(su, r)
    if not (set(su) <= set(_best(_values(user_rows, w), tie))
            and set(sm) <= set(_best(_values(miner_rows, l), tie))):
        return None
    return w, l


def _lerp(target, start, u):
    return (max(0.0, target[0] + (start[0] - target[0]) * u),
            max(0.0, target[1] + (start[1] - target[1]) * u))


def best_response_dynamics(params: GameParameters,
                           init: tuple[MinerStrategy, UserStrategy] | None = None,
                           max_iters: int = 10_000, damping: float = 0.1,
                           tol: float = 1e-4) -> DynamicsTrace:
    """Run damped best-response learning until successive iterates differ by < ``tol``.

    Non-convergence within ``max_iters`` is reported via ``converged=False``,
    not raised.
    """
    if params.C_d <= 0.0 or params.C_n <= 0.0:
        raise DomainError("best-response dynamics requires C_d > 0 and C_n > 0")
    if not 0.0 < damping <= 1.0:
        raise DomainError(f"damping must lie in (0, 1], got {damping}")
    if tol <= 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")
    miner, user = init if init is not None else (MinerStrategy(), UserStrategy())
    user_rows, miner_rows = payoff_bimatrix(params)
    tie = 1e-12 * params.payoff_scale
    tie_avg = 1e-9 * params.payoff_scale
    h = math.inf if damping == 1.0 else -math.log1p(-damping)

    w = (miner.omega_d, miner.omega_n)
    l = (user.lambda_d, user.lambda_n)
    trace = DynamicsTrace(iterates=[(miner, user)])
    for _ in range(max_iters):
        w_prev, l_prev = w, l
        remaining = h
        recent = []
        while remaining > 0.0:
            wt, lt, bu, bm = _targets(w, l, user_rows, miner_rows, tie)
            if wt == w and lt == l:
                break
            u_end = 0.0 if math.isinf(remaining) else math.exp(-remaining)
            recent.append((bu, bm))
            if len(recent) >= CHATTER_EVENTS:
                window = recent[-_CHATTER_WINDOW:]
                su = sorted({i for b, _ in window for i in b})
                sm = sorted({i for _, b in window for i in b})
                centre = _support_equilibrium(user_rows, miner_rows, su, sm, tie_avg)
                if centre is not None:
                    w, l = _lerp(centre[0], w, u_end), _lerp(centre[1], l, u_end)
                    trace.events += 1
                    break
            u = max(_first_switch(user_rows, bu, w, wt, u_end, tie),
                    _first_switch(miner_rows, bm, l, lt, u_end, tie))
            w, l = _lerp(wt, w, u), _lerp(lt, l, u)
            trace.events += 1
            if u <= u_end:
                break
            remaining += math.log(u)
            if trace.events >= MAX_EVENTS:
                break
        trace.iterates.append((_clip_miner(w), _clip_user(l)))
        step = max(abs(w[0] - w_prev[0]), abs(w[1] - w_prev[1]),
                   abs(l[0] - l_prev[0]), abs(l[1] - l_prev[1]))
        if step < tol:
            trace.converged = True
            break
        if trace.events >= MAX_EVENTS:
            break
    return trace


def _clip_miner(w):
    s = w[0] + w[1]
    return MinerStrategy(*(w if s <= 1.0 else (w[0] / s, w[1] / s)))


def _clip_user(l):
    s = l[0] + l[1]
    return UserStrategy(*(l if s <= 1.0 else (l[0] / s, l[1] / s)))
