"""Special L-values as truncated Laurent series in 1/t.

L_S(M, n) = prod_{v not in S} P_v(Nv^{-n})^{-1}, assembled degree by degree
over the finite places.  Truncation is either rigorous (Newton-slope bound:
a degree-d factor deviates from 1 at valuation >= d*(n - mu)) or empirical
(stop when the target digits stabilize across a window of degrees).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .errors import CheckpointMismatch, Divergent, PolicyExhausted
from .places import encodings_of_degree, shard_ranges
from .series import LaurentSeries


@dataclass(frozen=True)
class PrecisionPolicy:
    """Truncation policy for Euler products.

    precision: target X; the result is reported modulo t^{-X}.
    mode: "rigorous" (slope-bound truncation only) or "empirical"
    (additionally stop once digits above t^{-X} are unchanged for
    `window` consecutive degrees).
    max_degree: optional hard cap on the place degree.
    guard: extra working digits carried through the product.
    """

    precision: int
    mode: str = "rigorous"
    max_degree: int | None = None
    window: int = 5
    guard: int = 8

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.mode not in ("rigorous", "empirical"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.window < 1:
            raise ValueError("window must be >= 1")


@dataclass
class LValueResult:
    series: LaurentSeries
    mode: str
    degrees_used: int
    places_count: int
    degree_log: list = field(default_factory=list)
    policy: PrecisionPolicy | None = None


# u-series helpers on plain int lists (u = 1/t), length W+1


def _umul(q, a, b, W):
    out = [0] * (W + 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b[: W + 1 - i]):
                if y:
                    out[i + j] = (out[i + j] + x * y) % q
    return out


def _uinv(q, a, W):
    c0 = pow(a[0], q - 2, q)
    h = [0] * (W + 1)
    h[0] = c0
    for i in range(1, W + 1):
        s = 0
        for j in range(1, min(i, len(a) - 1) + 1):
            if a[j]:
                s += a[j] * h[i - j]
        h[i] = (-s * c0) % q
    return h


def _block_worker(args):
    return kernels.partial_product(*args)


def _max_degree_below(x, rate):
    """Largest d with d*rate < x, for Fraction rate > 0."""
    return (x * rate.denominator - 1) // rate.numerator


class _Checkpoint:
    def __init__(self, path, signature, W):
        self.path = path
        self.signature = signature
        self.W = W

    def load(self):
        if self.path is None or not os.path.exists(self.path):
            return None
        with open(self.path) as fh:
            data = json.load(fh)
        if data.get("signature") != self.signature:
            raise CheckpointMismatch(
                f"checkpoint {self.path} was produced by a different computation"
            )
        return data

    def save(self, done, acc, log, stable_run):
        if self.path is None:
            return
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(
                {
                    "signature": self.signature,
                    "done": done,
                    "acc": acc,
                    "log": log,
                    "stable_run": stable_run,
                },
                fh,
            )
        os.replace(tmp, self.path)


def l_value(M, n, policy, excluded=(), shards=1, checkpoint=None, cache_dir=None):
    """L_S(M, n) as a LaurentSeries in t, S = {infinity} + `excluded` places.

    M must be an effective sigma-module whose slope data gives a positive
    convergence rate n - mu; otherwise the product diverges.
    """
    q = M.q
    mu = -min(M.slopes_raw())
    rate = Fraction(n) - mu
    if rate <= 0:
        raise Divergent(f"n - mu = {rate} <= 0: the Euler product does not converge")
    X = policy.precision
    W = X + policy.guard
    d_rig = _max_degree_below(X, rate)
    d_cap = d_rig if policy.max_degree is None else min(policy.max_degree, d_rig)

    num, den, r, st = M.packed()
    excl = {}
    for p in excluded:
        excl.setdefault(p.d, set()).add(p.encoding())

    signature = {
        "q": q,
        "n": n,
        "W": W,
        "num": num,
        "den": den,
        "excluded": sorted((d, sorted(s)) for d, s in excl.items()),
    }
    ckpt = _Checkpoint(checkpoint, json.loads(json.dumps(signature)), W)
    state = ckpt.load()
    if state is not None:
        acc, done, log, stable_run = state["acc"], state["done"], state["log"], state["stable_run"]
    else:
        acc = [0] * (W + 1)
        acc[0] = 1
        done, log, stable_run = 0, [], 0

    places_count = sum(e["places"] for e in log)
    degrees_used = done
    stopped_early = False
    for d in range(done + 1, d_cap + 1):
        encs = encodings_of_degree(q, d, cache_dir)
        if d in excl:
            encs = [m for m in encs if m not in excl[d]]
        try:
            if shards > 1 and len(encs) >= 4 * shards:
                jobs = [
                    (q, d, encs[a:b], num, den, r, st, n, W)
                    for a, b in shard_ranges(len(encs), shards)
                ]
                block = None
                with ProcessPoolExecutor(max_workers=shards) as pool:
                    for part in pool.map(_block_worker, jobs):
                        block = part if block is None else _umul(q, block, part, W)
            else:
                block = kernels.partial_product(q, d, encs, num, den, r, st, n, W)
        except ValueError as e:
            raise Divergent(str(e)) from e
        new = _umul(q, acc, block, W)
        changed = [i for i in range(min(X, W + 1)) if new[i] != acc[i]]
        acc = new
        stable_run = 0 if changed else stable_run + 1
        places_count += len(encs)
        degrees_used = d
        log.append({"degree": d, "places": len(encs), "changed": changed})
        ckpt.save(d, acc, log, stable_run)
        if policy.mode == "empirical" and stable_run >= policy.window:
            stopped_early = True
            break

    # justified precision
    if degrees_used >= d_rig:
        prec = X
    elif stopped_early:
        prec = X  # empirical claim, labeled by mode
    else:
        # user capped the degree below the rigorous requirement
        tail = math.ceil((degrees_used + 1) * rate)
        if policy.mode == "empirical":
            raise PolicyExhausted(
                f"digits above t^-{X} did not stabilize by degree {degrees_used}"
            )
        prec = min(X, tail)
    series = LaurentSeries(q, "t", 0, acc, prec)
    return LValueResult(
        series=series,
        mode=policy.mode,
        degrees_used=degrees_used,
        places_count=places_count,
        degree_log=log,
        policy=policy,
    )


def l_value_of_module(M, policy, excluded=(), shards=1, checkpoint=None, cache_dir=None):
    """L(E, 0) for the t-module attached to the effective motive M.

    Equals L(M^dual, 0) = l_value(dual_twist(M), n) with n = M's
    effectivity exponent.
    """
    return l_value(
        M.dual_twist(),
        M.n,
        policy,
        excluded=excluded,
        shards=shards,
        checkpoint=checkpoint,
        cache_dir=cache_dir,
    )


def zeta_direct(q, n, max_deg):
    """zeta(n) = sum over monic f of f^{-n}, through deg f <= max_deg.

    Degree-d terms have valuation n*d, so the result is exact modulo
    t^{-n*(max_deg+1)}.
    """
    if n < 1:
        raise ValueError("zeta_direct needs n >= 1")
    W = n * (max_deg + 1)
    acc = [0] * (W + 1)
    acc[0] = 1  # f = 1
    for d in range(1, max_deg + 1):
        if n * d > W:
            break
        for m in range(q**d):
            f = kernels.decode(q, d, m)
            g = [1]
            for _ in range(n):
                gn = [0] * (len(g) + d)
                for i, x in enumerate(g):
                    if x:
                        for j, y in enumerate(f):
                            gn[i + j] = (gn[i + j] + x * y) % q
                g = gn
            h = _uinv(q, g[::-1], W - n * d)
            for i, y in enumerate(h):
                acc[n * d + i] = (acc[n * d + i] + y) % q
    return LaurentSeries(q, "t", 0, acc, W)


def rank1_twisted_sum(q, alpha, max_deg):
    """sum over monic f of alpha^{deg f} / f, through deg f <= max_deg.

    This is the change-of-variable form of L(E, 0) for the rank-1 Drinfeld
    module t -> theta + alpha tau; exact modulo t^{-(max_deg+1)}.
    """
    alpha %= q
    if alpha == 0:
        raise ValueError("alpha must be a unit")
    W = max_deg + 1
    acc = [0] * (W + 1)
    acc[0] = 1
    a_pow = 1
    for d in range(1, max_deg + 1):
        a_pow = a_pow * alpha % q
        for m in range(q**d):
            f = kernels.decode(q, d, m)
            h = _uinv(q, f[::-1], W - d)
            for i, y in enumerate(h):
                acc[d + i] = (acc[d + i] + a_pow * y) % q
    return LaurentSeries(q, "t", 0, acc, W)
