"""Numerical check of the lattice equation in W_E.

For an effective motive M with t-module E the check compares the
determinant of [w(log_E(z_i))] against L(E,0) * det W_E(O_K), both living
in the one-dimensional F_q((1/theta))-line det W_E.  The quotient should
be a unit constant; the report records how deep the two sides agree.

The check is one-sided: it can exhibit consistency to some depth, never a
proof.  Divergent logarithms are surfaced, not hidden.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bridge import lattice_det, motive_to_module
from .errors import DimensionMismatch, Divergent, LogDivergent, PolicyExhausted
from .lseries import LValueResult, l_value_of_module
from .ratfun import RationalFn
from .series import LaurentSeries, poly_to_series, substitute_t_theta
from .tmodule import (
    KInfPoint,
    _apply_matrix,
    evaluate,
    exp_coefficients,
    log_coefficients,
    nearest_integral,
)


@dataclass(frozen=True)
class LatticeReport:
    """Outcome of one lattice check.

    det_numerator is det[w(log z_i)] and det_denominator is
    L(E,0)|_{t=theta} times the determinant of the W_E(O_K) basis; ratio is
    their quotient and deviation the exponent depth to which the ratio is a
    constant.  The dimension-one exponential form fills integral_part
    instead of the determinant fields.
    """

    l_value: LValueResult
    dim_w: int
    deviation: int
    verdict: str
    precision: int
    det_numerator: LaurentSeries | None = None
    det_denominator: LaurentSeries | None = None
    ratio: LaurentSeries | None = None
    constant: int | None = None
    points: tuple | None = None
    integral_part: tuple | None = None
    exp_order: int | None = None
    notes: tuple = ()

    def lines(self):
        out = [f"dim W_E = {self.dim_w}"]
        out.append(f"L(E,0) = {self.l_value.series} [{self.l_value.mode}, "
                   f"degrees <= {self.l_value.degrees_used}, "
                   f"{self.l_value.places_count} places]")
        if self.points is not None:
            for i, z in enumerate(self.points):
                out.append(f"z_{i + 1} = (" + ", ".join(str(c) for c in z) + ")")
        if self.det_numerator is not None:
            out.append(f"det[w(log z_i)] = {self.det_numerator}")
            out.append(f"L(E,0)*det W_E(O_K) = {self.det_denominator}")
            out.append(f"ratio = {self.ratio}")
        if self.integral_part is not None:
            body = ", ".join(str(p) for p in self.integral_part)
            out.append(f"exp_E(L(E,0) e) = ({body}) + tail")
        out.extend(self.notes)
        out.append(f"deviation = {self.deviation}")
        out.append(self.verdict)
        return out

    def __str__(self):
        return "\n".join(self.lines())


_ORDER_START = 4
_ORDER_CAP = 24


def _eval_grow(E, x, precision, use_log, order=_ORDER_START, cap=_ORDER_CAP):
    """Evaluate exp_E (or log_E) at x, growing the series order on demand.

    Coefficient degrees grow like q^order, so the order is raised in small
    steps rather than guessed high up front.
    """
    while True:
        exp = exp_coefficients(E, order)
        series = log_coefficients(exp) if use_log else exp
        try:
            return evaluate(series, x, precision), order
        except PolicyExhausted:
            if order >= cap:
                raise
            order = min(cap, order + 2)


def _series_det(mat):
    k = len(mat)
    if k == 1:
        return mat[0][0]
    acc = None
    for perm in itertools.permutations(range(k)):
        sign = 1
        for a in range(k):
            for b in range(a + 1, k):
                if perm[a] > perm[b]:
                    sign = -sign
        term = mat[0][perm[0]]
        for i in range(1, k):
            term = term * mat[i][perm[i]]
        if sign < 0:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _parse_point(q, coords, precision):
    lifted = []
    for c in coords:
        r = c if isinstance(c, RationalFn) else RationalFn.parse(q, str(c))
        if not r.is_polynomial():
            raise ValueError(f"point coordinate {c} is not integral")
        lifted.append(r)
    return tuple(lifted), KInfPoint.from_rationals(q, lifted, precision)


def verify_logalg(M, policy, degree_bound=10):
    """Check exp_E(L(E,0) e) in E(O_K) for a dimension-one module.

    e is the O_K-generator 1 of Lie_E = K; the report's deviation is the
    depth to which the evaluated point is a polynomial in theta.
    """
    bridge = motive_to_module(M)
    E = bridge.module
    if E.d != 1:
        raise DimensionMismatch("the exponential form needs a dimension-one module")
    lres = l_value_of_module(M, policy)
    # the argument only carries policy.precision digits, so evaluating the
    # exponential deeper than that would manufacture unearned tail digits
    wp = policy.precision
    arg = KInfPoint((substitute_t_theta(lres.series).truncate(wp),))
    result, order = _eval_grow(E, arg, wp, use_log=False)
    polys, dev = nearest_integral(result.point, degree_bound)
    dev = min(dev, policy.precision)
    return LatticeReport(
        l_value=lres,
        dim_w=bridge.dim_w,
        deviation=dev,
        verdict=f"consistent with the conjecture to theta^-{dev}",
        precision=policy.precision,
        integral_part=polys,
        exp_order=order,
    )


def _auto_points(E, log_eval, dim_w, w_matrix, wp):
    """Unit-vector scan: the first dim_w converging logs with independent
    w-images, preferring earlier coordinates."""
    q = E.q
    candidates = []
    for i in range(E.d):
        coords = tuple(RationalFn.one(q) if j == i else RationalFn.zero(q)
                       for j in range(E.d))
        z = KInfPoint.from_rationals(q, coords, wp)
        try:
            lg = log_eval(z)
        except Divergent:
            continue
        candidates.append((coords, lg))
    if len(candidates) < dim_w:
        raise LogDivergent(
            f"only {len(candidates)} unit vectors have converging logarithms; "
            f"{dim_w} independent points are needed"
        )
    best = None
    for subset in itertools.combinations(range(len(candidates)), dim_w):
        cols = [_apply_matrix(q, w_matrix, candidates[i][1].point.coords, wp)
                for i in subset]
        det = _series_det([[cols[j][i] for j in range(dim_w)] for i in range(dim_w)])
        if det.is_zero():
            continue
        # smaller leading exponent = smaller lattice; ties keep the earlier scan
        if best is None or det.v0 < best[0]:
            best = (det.v0, subset)
    if best is None:
        raise LogDivergent("no unit-vector combination gives an invertible w-log matrix")
    return [candidates[i] for i in best[1]]


def verify_conjecture(M, points=None, policy=None):
    """Lattice check for the module Z generated by the supplied points.

    points: dim_w integral points of E(O_K) as coordinate sequences
    (polynomials in theta); omitted, a unit-vector scan picks them.
    Dimension-one modules with no explicit points delegate to the
    exponential form.
    """
    if policy is None:
        raise ValueError("a PrecisionPolicy is required")
    bridge = motive_to_module(M)
    E = bridge.module
    if E.d == 1 and points is None:
        return verify_logalg(M, policy)
    q = E.q
    wp = policy.precision + policy.guard
    lres = l_value_of_module(M, policy)

    state = {"order": _ORDER_START}

    def log_eval(z):
        res, state["order"] = _eval_grow(E, z, wp, use_log=True,
                                         order=state["order"])
        return res

    notes = []
    if not bridge.integral:
        notes.append("module matrices are not integral; "
                     "integrality of points is interpreted formally")

    if points is None:
        chosen = _auto_points(E, log_eval, bridge.dim_w, bridge.w_matrix, wp)
    else:
        if len(points) != bridge.dim_w:
            raise DimensionMismatch(
                f"{len(points)} points supplied but dim W_E = {bridge.dim_w}"
            )
        chosen = []
        for i, coords in enumerate(points):
            if len(coords) != E.d:
                raise DimensionMismatch(
                    f"point {i + 1} has {len(coords)} coordinates, module needs {E.d}"
                )
            lifted, z = _parse_point(q, coords, wp)
            try:
                lg = log_eval(z)
            except Divergent as e:
                raise LogDivergent(f"log of point {i + 1} diverges: {e}") from e
            chosen.append((lifted, lg))

    k = bridge.dim_w
    cols = [_apply_matrix(q, bridge.w_matrix, lg.point.coords, wp)
            for _, lg in chosen]
    det_num = _series_det([[cols[j][i] for j in range(k)] for i in range(k)])
    lat = lattice_det(bridge.w_matrix)
    det_den = substitute_t_theta(lres.series) * poly_to_series(lat, wp)
    ratio = det_num * det_den.inverse()
    const, dev = ratio.constant_deviation()
    dev = min(dev, policy.precision)
    if const == 0:
        verdict = "determinant ratio has zero constant term: inconsistent"
        dev = 0
    else:
        verdict = f"consistent with the conjecture to theta^-{dev}"
    return LatticeReport(
        l_value=lres,
        dim_w=k,
        deviation=dev,
        verdict=verdict,
        precision=policy.precision,
        det_numerator=det_num.truncate(policy.precision),
        det_denominator=det_den.truncate(policy.precision),
        ratio=ratio.truncate(policy.precision),
        constant=const,
        points=tuple(lifted for lifted, _ in chosen),
        exp_order=state["order"],
        notes=tuple(notes),
    )
