"""Order-by-order solving of the associativity equations over graph classes.

The deformation series is graded by the formal parameter; at each order k the
equation  delta(c_k) + (1/2) sum_{a+b=k} [c_a, c_b] = 0  only needs to hold
modulo the Jacobi ideal (combinations that vanish on every Poisson
structure), which at graph level is relaxed to the span of Leibniz-generator
expansions.

Scaling the bivector splits everything by the number of internal vertices, so
the linear system decomposes into per-count blocks: unknowns for c_k range
over (wheel-free) classes with 1..k internal vertices, Leibniz multipliers
over generators of matching count.  A ``solved`` report re-verifies with an
independent pivot order; an ``obstructed`` graph-level verdict is always
grounded by the evaluation route, whose infeasibility certificate quantifies
over concrete Poisson structures and is therefore sound unconditionally.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceededError, DimensionError, GraphError
from .graphs import GraphClass, GraphSum, enumerate_graphs, has_wheel, parse_graph
from .homology import graph_delta, graph_gerstenhaber, leibniz_generators
from .linalg import StreamingReducer, echelon, projected_dimension
from .operators import compile_sum, oracle_delta
from .poisson import POISSON, PoissonStructure, preset_poisson
from .poly import Poly, monomials_up_to_degree

DEFAULT_ORDER_CAP = 4
DEFAULT_MATRIX_NONZERO_CAP = 200_000

POISSON_GRAPH = "1 2 ; 3: 1 2"


def poisson_class_sum() -> GraphSum:
    """The Poisson bracket as a one-term arity-2 sum."""
    return GraphSum.single(POISSON_GRAPH)


def antisymmetric_part(s: GraphSum) -> GraphSum:
    if s.arity != 2:
        raise GraphError("antisymmetric part needs arity 2, got %d" % s.arity)
    return (s - s.permute_args((2, 1))).scale(Fraction(1, 2))


@dataclass
class StarSeries:
    """Deformation orders k -> arity-2 GraphSum; the order-0 product is
    implicit and never stored."""

    orders: dict = field(default_factory=dict)

    def __post_init__(self):
        for k, s in self.orders.items():
            if k < 1:
                raise GraphError("orders are k >= 1, got %d" % k)
            if s.arity != 2:
                raise GraphError("order %d has arity %d, expected 2" % (k, s.arity))
        first = self.orders.get(1)
        if first is not None and antisymmetric_part(first) != poisson_class_sum():
            raise GraphError("order 1 must have antisymmetric part equal to the "
                             "Poisson class")

    def order(self, k: int) -> GraphSum:
        s = self.orders.get(k)
        if s is None:
            raise GraphError("series is missing order %d" % k)
        return s

    def with_order(self, k: int, s: GraphSum) -> "StarSeries":
        new_orders = dict(self.orders)
        new_orders[k] = s
        return StarSeries(new_orders)


def kontsevich_k2() -> StarSeries:
    """Orders 1 and 2 of the Kontsevich expansion: the Poisson class plus the
    four order-2 graphs with weights 1/2, 1/3, 1/3, -1/6 (the last one is the
    two-cycle graph)."""
    order2 = GraphSum(2, [
        ("2 2 ; 3: 1 2 / 4: 1 2", Fraction(1, 2)),
        ("2 2 ; 3: 1 4 / 4: 1 2", Fraction(1, 3)),
        ("2 2 ; 3: 1 2 / 4: 3 2", Fraction(1, 3)),
        ("2 2 ; 3: 1 4 / 4: 3 2", Fraction(-1, 6)),
    ])
    return StarSeries({1: poisson_class_sum(), 2: order2})

KONTSEVICH_K2_ENCODINGS = (
    "2 2 ; 3: 1 2 / 4: 1 2",
    "2 2 ; 3: 1 4 / 4: 1 2",
    "2 2 ; 3: 1 2 / 4: 3 2",
    "2 2 ; 3: 1 4 / 4: 3 2",
)
KONTSEVICH_K2_WEIGHTS = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 3),
                         Fraction(-1, 6))


def mc_defect(series: StarSeries, k: int) -> GraphSum:
    """(1/2) sum_{a+b=k, a,b>=1} [c_a, c_b]; empty at k = 1."""
    total = GraphSum.zero(3)
    for a in range(1, k):
        b = k - a
        total = total + graph_gerstenhaber(series.order(a), series.order(b))
    return total.scale(Fraction(1, 2))


@dataclass
class MCReport:
    order: int
    status: str  # solved | obstructed | inconclusive
    basis_size: int = 0
    matrix_shape: tuple = (0, 0)
    affine_dim: int = 0
    solution: GraphSum | None = None
    certificate: dict | None = None
    blocks: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "status": self.status,
            "basis_size": self.basis_size,
            "matrix_shape": list(self.matrix_shape),
            "affine_dim": self.affine_dim,
            "solution": (self.solution.to_lines() if self.solution is not None
                         else None),
            "certificate": self.certificate,
            "blocks": self.blocks,
        }


def _wheel_basis(n: int, wheel_free: bool) -> list:
    which = "wheel_free" if wheel_free else "all"
    return list(enumerate_graphs(n, 2, which).classes)


def _solve_count_block(n: int, defect_n: GraphSum, wheel_free: bool,
                       nonzero_cap: int):
    """Assemble and solve  delta(c) + defect_n = sum lambda_i L_i  over the
    classes with n internal vertices.  Returns a dict describing the block."""
    basis = _wheel_basis(n, wheel_free)
    generators = leibniz_generators(n, 3) if n >= 2 else []
    row_index: dict = {}

    def row_of(rep) -> int:
        idx = row_index.get(rep.key)
        if idx is None:
            idx = len(row_index)
            row_index[rep.key] = idx
        return idx

    ncols = len(basis) + len(generators)
    columns: list[dict] = []
    for cls in basis:
        image = graph_delta(GraphSum.single(cls.rep))
        columns.append({row_of(c.rep): coeff for c, coeff in image.terms()})
    for gen in generators:
        columns.append({row_of(c.rep): -coeff for c, coeff in gen.expansion.terms()})
    rhs_entries = {row_of(c.rep): -coeff for c, coeff in defect_n.terms()}

    nrows = len(row_index)
    rows: list[dict] = [dict() for _ in range(nrows)]
    for col, entries in enumerate(columns):
        for row, value in entries.items():
            rows[row][col] = value
    rhs = [Fraction(0)] * nrows
    for row, value in rhs_entries.items():
        rhs[row] = value

    ech = echelon(rows, rhs, ncols, "markowitz", nonzero_budget=nonzero_cap)
    block = {
        "count": n,
        "basis": basis,
        "generators": generators,
        "rows": rows,
        "rhs": rhs,
        "ncols": ncols,
        "shape": (nrows, ncols),
        "rank": ech.rank,
        "feasible": not ech.inconsistent,
        "particular": ech.particular_solution(),
        "nullspace": ech.nullspace() if not ech.inconsistent else [],
    }
    return block


def _block_solution(block) -> GraphSum:
    basis = block["basis"]
    particular = block["particular"] or {}
    return GraphSum(2, [(basis[col].rep, value)
                       for col, value in particular.items() if col < len(basis)])


def verify_order(series: StarSeries, k: int, strategy: str = "ordered") -> bool:
    """Independent re-check: delta(c_k) + defect lies in the Leibniz span,
    established by a fresh elimination with the given pivot strategy."""
    residual = graph_delta(series.order(k)) + mc_defect(series, k)
    if residual.is_zero:
        return True
    for n in residual.internal_counts():
        part = residual.restrict_count(n)
        if n < 2:
            return False
        generators = leibniz_generators(n, 3)
        row_index: dict = {}
        for cls, _ in part.terms():
            row_index.setdefault(cls.rep.key, len(row_index))
        columns = []
        for gen in generators:
            entries = {}
            for cls, coeff in gen.expansion.terms():
                idx = row_index.setdefault(cls.rep.key, len(row_index))
                entries[idx] = coeff
            columns.append(entries)
        nrows = len(row_index)
        rows = [dict() for _ in range(nrows)]
        for col, entries in enumerate(columns):
            for row, value in entries.items():
                rows[row][col] = value
        rhs = [Fraction(0)] * nrows
        for cls, coeff in part.terms():
            rhs[row_index[cls.rep.key]] = coeff
        if echelon(rows, rhs, len(columns), strategy).inconsistent:
            return False
    return True


def solve_order(series: StarSeries, k: int, wheel_free: bool = True,
                nonzero_cap: int = DEFAULT_MATRIX_NONZERO_CAP,
                order_cap: int = DEFAULT_ORDER_CAP,
                seed: int = 0) -> MCReport:
    """Solve the order-k equation over (wheel-free) classes with up to k
    internal vertices plus Leibniz multipliers.  A graph-level obstruction is
    grounded by the evaluation route before being reported."""
    if k < 1:
        raise GraphError("order must be >= 1, got %d" % k)
    if k > order_cap:
        raise BudgetExceededError("order %d exceeds the order cap %d" % (k, order_cap))
    for a in range(1, k):
        series.order(a)  # raises on missing orders
    if k == 1:
        # delta(c_1) = 0 and the antisymmetric-part normalization force the
        # Poisson class itself; no residual freedom survives the normalization.
        return MCReport(order=1, status="solved", basis_size=1,
                        matrix_shape=(1, 1), affine_dim=0,
                        solution=poisson_class_sum())
    if antisymmetric_part(series.order(1)) != poisson_class_sum():
        raise GraphError("missing normalization: order 1 must be the Poisson class")

    defect = mc_defect(series, k)
    blocks = []
    feasible = True
    for n in range(1, k + 1):
        block = _solve_count_block(n, defect.restrict_count(n), wheel_free,
                                   nonzero_cap)
        blocks.append(block)
        if not block["feasible"]:
            feasible = False
    stray = [n for n in defect.internal_counts() if n > k]
    if stray:
        # counts above k have no unknowns and no relaxation at this order
        feasible = False

    basis_size = sum(len(b["basis"]) for b in blocks)
    shape = (sum(b["shape"][0] for b in blocks), sum(b["shape"][1] for b in blocks))
    block_summaries = [{
        "count": b["count"],
        "basis_size": len(b["basis"]),
        "generator_count": len(b["generators"]),
        "shape": list(b["shape"]),
        "rank": b["rank"],
        "feasible": b["feasible"],
    } for b in blocks]

    if feasible:
        solution = GraphSum.zero(2)
        affine = 0
        for b in blocks:
            solution = solution + _block_solution(b)
            affine += projected_dimension(b["nullspace"], len(b["basis"]))
        candidate = series.with_order(k, solution)
        if not verify_order(candidate, k, strategy="ordered"):
            raise AssertionError("solution failed the independent re-verification "
                                 "pass at order %d" % k)
        return MCReport(order=k, status="solved", basis_size=basis_size,
                        matrix_shape=shape, affine_dim=affine,
                        solution=solution, blocks=block_summaries)

    # graph-level obstruction: ground it with the evaluation route
    report = eval_obstruction(series, k, fixtures=None, seed=seed,
                              wheel_free=wheel_free)
    report.blocks = block_summaries
    if report.certificate is not None:
        report.certificate["graph_level"] = {
            "kind": "leibniz_gap",
            "detail": "no coefficient assignment matches the defect modulo the "
                      "Leibniz span",
            "shape": list(shape),
        }
    report.basis_size = basis_size
    return report


# ---------------------------------------------------------------------------
# evaluation route


def _random_cubic(seed: int) -> Poly:
    rng = random.Random(seed)
    monos = [e for e in _cubic_exponents()]
    total = Poly.zero(3)
    picks = rng.sample(range(len(monos)), 4)
    for i in picks:
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        total = total + Poly.monomial(3, monos[i], coeff)
    return total


def _cubic_exponents():
    out = []
    for a in range(4):
        for b in range(4 - a):
            out.append((a, b, 3 - a - b))
    return out


def policy_fixtures(seed: int):
    """The fixture family of the growth policy, in feeding order."""
    return [preset_poisson("so3"),
            preset_poisson("sl2"),
            preset_poisson("jacobian", _random_cubic(seed)),
            preset_poisson("jacobian", Poly.monomial(3, (1, 1, 1)))]


def triples_by_total_degree(d: int, cap: int, prev_cap: int = 0):
    """Monomial triples with each argument of degree <= cap and at least one
    argument of degree > prev_cap, ordered by total degree (witnesses of
    infeasibility live at low degree, so they are met first)."""
    by_degree = {}
    for deg in range(1, cap + 1):
        by_degree[deg] = monomials_up_to_degree(d, deg, min_degree=deg)
    for total in range(3, 3 * cap + 1):
        for a in range(1, cap + 1):
            for b in range(1, cap + 1):
                c = total - a - b
                if not 1 <= c <= cap:
                    continue
                if max(a, b, c) <= prev_cap:
                    continue
                for f in by_degree[a]:
                    for g in by_degree[b]:
                        for h in by_degree[c]:
                            yield (f, g, h)


def _delta_value(op, triple):
    """delta(B)(f, g, h) for one compiled arity-2 operator."""
    f, g, h = triple
    return (op.apply((f, g)) * h - f * op.apply((g, h))
            + op.apply((f * g, h)) - op.apply((f, g * h)))


STALL_WINDOW = 250  # consecutive rank-neutral triples before a feed is cut short


def eval_obstruction(series: StarSeries, k: int, fixtures=None, *, seed: int = 0,
                     wheel_free: bool = True, reverify: bool = True) -> MCReport:
    """Stack the evaluated equations  delta(c_k)(triple) = -defect(triple)
    over concrete Poisson structures; infeasibility of the stacked system is
    a sound obstruction certificate, feasibility alone is inconclusive.

    ``fixtures`` is a list of (PoissonStructure, [argument tuples]); when
    None, the fixture-growth policy feeds so3, then sl2, then two jacobian
    cubics, then doubles the argument-degree cap, until either an
    inconsistency appears or the rank is unchanged for two consecutive
    rounds."""
    basis: list[GraphClass] = []
    for n in range(1, k + 1):
        basis.extend(_wheel_basis(n, wheel_free))
    defect = mc_defect(series, k)
    reducer = StreamingReducer(keep_raw=True)
    used: list[dict] = []

    def feed(p: PoissonStructure, triples, exhaustive: bool) -> bool:
        """Returns True when an inconsistency was found."""
        if p.jacobi_verified != POISSON:
            raise DimensionError("evaluation fixtures must be verified Poisson "
                                 "structures (%s is %s)" % (p.label, p.jacobi_verified))
        ops = [compile_sum(GraphSum.single(cls.rep), p) for cls in basis]
        defect_op = compile_sum(defect, p)
        stall = 0
        count = 0
        for triple in triples:
            count += 1
            row_polys = [_delta_value(op, triple) for op in ops]
            f, g, h = triple
            rhs_poly = -(defect_op.apply((f, g, h)))
            exps = set()
            for poly in row_polys:
                exps.update(poly.terms)
            exps.update(rhs_poly.terms)
            progressed = False
            for e in sorted(exps):
                row = {}
                for col, poly in enumerate(row_polys):
                    c = poly.terms.get(e)
                    if c:
                        row[col] = c
                outcome = reducer.add_row(row, rhs_poly.terms.get(e, Fraction(0)))
                if outcome == "inconsistent":
                    used.append({"fixture": p.label, "triples_evaluated": count,
                                 "args": [str(x) for x in triple]})
                    return True
                if outcome == "pivot":
                    progressed = True
            stall = 0 if progressed else stall + 1
            if not exhaustive and stall >= STALL_WINDOW:
                break
        used.append({"fixture": p.label, "triples_evaluated": count})
        return False

    policy = "explicit"
    if fixtures is not None:
        infeasible = False
        for p, triples in fixtures:
            if feed(p, triples, exhaustive=True):
                infeasible = True
                break
        ranks = [reducer.rank]
    else:
        policy = "fixture_growth"
        infeasible = False
        ranks = []
        family = policy_fixtures(seed)
        prev_cap, cap = 0, 2
        while True:
            # one round: feed the triples new at this cap, fixture by fixture
            for p in family:
                if feed(p, triples_by_total_degree(p.d, cap, prev_cap),
                        exhaustive=False):
                    infeasible = True
                    break
                ranks.append(reducer.rank)
                # every fixture must have been fed once before the
                # rank-stabilization stop may fire
                if (len(ranks) >= len(family) + 2
                        and ranks[-1] == ranks[-2] == ranks[-3]):
                    break
            else:
                prev_cap, cap = cap, cap * 2
                if cap > 8:
                    break
                continue
            break

    certificate = {
        "kind": "evaluated_system_infeasible" if infeasible else "evaluated_system_feasible",
        "policy": policy,
        "fixtures": used,
        "unknowns": len(basis),
        "rows_collected": len(reducer.raw_rows),
        "rank_coefficient": reducer.rank,
        "rank_augmented": reducer.rank + (1 if reducer.inconsistent else 0),
        "round_ranks": ranks,
    }
    if reverify:
        second = reducer.reverify("markowitz")
        if second["inconsistent"] != infeasible:
            raise AssertionError("independent pivoting disagreed on feasibility")
        certificate["reverified"] = second
    status = "obstructed" if infeasible else "inconclusive"
    return MCReport(order=k, status=status, basis_size=len(basis),
                    matrix_shape=(len(reducer.raw_rows), len(basis)),
                    affine_dim=0, solution=None, certificate=certificate)


# ---------------------------------------------------------------------------
# kernels and series utilities


def cocycle_kernel(n: int, wheel_free: bool = True, modulo_leibniz: bool = False,
                   nonzero_cap: int = DEFAULT_MATRIX_NONZERO_CAP) -> list:
    """Exact nullspace basis of the graph differential on the chosen span of
    arity-2 classes with n internal vertices, optionally modulo the Leibniz
    span; returned as GraphSums."""
    if n < 1:
        raise GraphError("need n >= 1, got %d" % n)
    basis = _wheel_basis(n, wheel_free)
    generators = leibniz_generators(n, 3) if (modulo_leibniz and n >= 2) else []
    row_index: dict = {}
    columns = []
    for cls in basis:
        image = graph_delta(GraphSum.single(cls.rep))
        entries = {}
        for c, coeff in image.terms():
            idx = row_index.setdefault(c.rep.key, len(row_index))
            entries[idx] = coeff
        columns.append(entries)
    for gen in generators:
        entries = {}
        for c, coeff in gen.expansion.terms():
            idx = row_index.setdefault(c.rep.key, len(row_index))
            entries[idx] = -coeff
        columns.append(entries)
    nrows = len(row_index)
    rows = [dict() for _ in range(nrows)]
    for col, entries in enumerate(columns):
        for row, value in entries.items():
            rows[row][col] = value
    ech = echelon(rows, None, len(columns), "markowitz", nonzero_budget=nonzero_cap)
    null = ech.nullspace()
    keep = len(basis)
    projected = [{c: v for c, v in vec.items() if c < keep} for vec in null]
    projected = [r for r in projected if r]
    if not projected:
        return []
    reduced = echelon(projected, None, keep, "ordered")
    out = []
    for row in reduced.rows:
        out.append(GraphSum(2, [(basis[col].rep, coeff) for col, coeff in row.items()]))
    return out


def reparametrize(series: StarSeries, alphas: dict) -> StarSeries:
    """Change of the formal parameter t -> t + sum_{j>=2} alpha_j t^j applied
    to the series; order k receives  sum_i c_i [t^k] (t + ...)^i."""
    if not series.orders:
        return StarSeries({})
    max_order = max(series.orders)
    # coefficients of h(t)^i as dense lists indexed by power of t
    h = [Fraction(0)] * (max_order + 1)
    if max_order >= 1:
        h[1] = Fraction(1)
    for j, a in alphas.items():
        if j < 2:
            raise GraphError("reparametrization exponents start at 2")
        if j <= max_order:
            h[j] = Fraction(a)
    powers = [None, h]
    for i in range(2, max_order + 1):
        prev = powers[i - 1]
        cur = [Fraction(0)] * (max_order + 1)
        for a in range(1, max_order + 1):
            if not prev[a]:
                continue
            for b in range(1, max_order + 1 - a):
                if h[b]:
                    cur[a + b] += prev[a] * h[b]
        powers.append(cur)
    new_orders = {}
    for k in range(1, max_order + 1):
        total = GraphSum.zero(2)
        for i in range(1, k + 1):
            if i in series.orders and powers[i][k]:
                total = total + series.orders[i].scale(powers[i][k])
        new_orders[k] = total
    return StarSeries(new_orders)


def solve_up_to(max_order: int, wheel_free: bool = True, seed: int = 0,
                nonzero_cap: int = DEFAULT_MATRIX_NONZERO_CAP,
                order_cap: int = DEFAULT_ORDER_CAP):
    """Build a series order by order; returns (series, [MCReport]).  Solving
    stops at the first obstructed order."""
    series = StarSeries({})
    reports = []
    for k in range(1, max_order + 1):
        report = solve_order(series, k, wheel_free=wheel_free,
                             nonzero_cap=nonzero_cap, order_cap=order_cap,
                             seed=seed)
        reports.append(report)
        if report.status != "solved":
            break
        series = series.with_order(k, report.solution)
    return series, reports
