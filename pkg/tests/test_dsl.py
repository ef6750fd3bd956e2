"""Scenario language: grammar, positioned errors, round trips, report rendering."""

import json
import random
from fractions import Fraction as Fr

import pytest

from kvgeom.dsl import (
    AlgebraDecl,
    BivectorDecl,
    CheckDirective,
    CheckOptions,
    CheckOutcome,
    ManifoldDecl,
    MapDecl,
    ScalarDecl,
    Scenario,
    SubmanifoldDecl,
    Witness,
    bind_scenario,
    parse_scenario,
    render_report,
    serialize,
)
from kvgeom.errors import ParseError, SemanticError
from kvgeom.symexpr import Expr, parse_expr


def test_parse_minimal_scenario():
    s = parse_scenario(
        "manifold M { dim 2 coords [x y] } bivector h on M { [x, 0; 0, y] } check codazzi h"
    )
    assert len(s.declarations) == 2
    assert len(s.checks) == 1
    assert s.checks[0].kind == "codazzi"
    env = bind_scenario(s)
    assert env.bivectors["h"].entries[0][0] == Expr.var("x")


def test_upper_triangle_shorthand():
    s = parse_scenario("manifold M { dim 3 coords [x y z] } bivector h on M { [1, 2, 3; 4, 5; 6] }")
    h = s.declarations[1]
    assert h.entries[1][0] == Expr.const(2)
    assert h.entries[2][0] == Expr.const(3)
    assert h.entries[2][1] == Expr.const(5)
    assert h.entries[2][2] == Expr.const(6)


def test_parse_error_positions():
    with pytest.raises(ParseError) as exc:
        parse_scenario("manifold M { dim 2 coords [x y] }\nbivector h on M { [x +, 0; 0, y] }")
    assert exc.value.line == 2
    with pytest.raises(ParseError) as exc2:
        parse_scenario("manifold M { dim 2\ncoords [x y }")
    assert exc2.value.line == 2
    with pytest.raises(ParseError):
        parse_scenario("check codazzi")  # missing argument
    with pytest.raises(ParseError):
        parse_scenario("check frobnicate h")  # unknown kind
    with pytest.raises(ParseError):
        parse_scenario("manifold M { dim 2 coords [x y] } bivector h on M { [1/0] }")


def test_semantic_errors():
    with pytest.raises(SemanticError) as exc:
        parse_scenario("manifold M { dim 2 coords [x y] } bivector h on M { [0, x; 1, 0] }")
    assert "asymmetric" in exc.value.message
    with pytest.raises(SemanticError):
        parse_scenario("manifold M { dim 2 coords [x y] } manifold M { dim 1 coords [t] }")
    with pytest.raises(SemanticError):
        parse_scenario("check codazzi missing")
    with pytest.raises(SemanticError):
        parse_scenario("manifold M { dim 2 coords [x x] }")
    with pytest.raises(SemanticError):
        parse_scenario("manifold M { dim 2 coords [x y] } scalar f on M = q + x")
    with pytest.raises(SemanticError):
        # chart mismatch between submanifold and bivector
        parse_scenario(
            "manifold M { dim 2 coords [x y] } manifold N { dim 1 coords [t] } "
            "bivector h on N { [t] } submanifold S in M { origin [0, 0] basis [1, 0] } "
            "check submanifold S h"
        )
    with pytest.raises(SemanticError):
        parse_scenario("algebra A { dim 2 product { 1 1 3 : 1 } }")  # index out of range
    with pytest.raises(SemanticError):
        parse_scenario("algebra A { dim 2 product { 1 1 1 : 1 } } check annihilator A")
    with pytest.raises(SemanticError):
        parse_scenario("manifold check { dim 1 coords [t] }")  # reserved word


def test_malformed_fixtures_all_raise_positioned_errors():
    fixtures = [
        "manifold",
        "manifold M",
        "manifold M { dim }",
        "manifold M { dim 2 coords [x y] ",
        "bivector h on M { [x] }",
        "scalar f on",
        "map F : A -> { matrix [1] offset [0] }",
        "submanifold N in M { origin }",
        "algebra A { dim 2 product 1 1 1 : 1 }",
        "check",
        "check codazzi h extra_token_not_a_check",
        "manifold M { dim 2 coords [x y] } bivector h on M { [x, ; 0, y] }",
        "manifold M { dim 2 coords [x y] } check rank h { samples 0 }",
        "manifold M { dim 2 coords [x y] } check rank h { bogus 1 }",
        "manifold M { dim 1 coords [x] } bivector h on M { [x^y] }",
        "manifold M { dim 1 coords [x] } bivector h on M { [3/0*x] }",
    ]
    for text in fixtures:
        with pytest.raises((ParseError, SemanticError)) as exc:
            parse_scenario(text)
        assert exc.value.line >= 1 and exc.value.column >= 1


def _random_scenario(rng: random.Random) -> Scenario:
    decls = []
    checks = []
    n_charts = rng.randint(1, 3)
    charts = []
    for ci in range(n_charts):
        dim = rng.randint(1, 3)
        coords = tuple(f"c{ci}_{j}" for j in range(dim))
        name = f"M{ci}"
        decls.append(ManifoldDecl(name, dim, coords))
        charts.append((name, dim, coords))
    bivs = []
    for bi in range(rng.randint(1, 3)):
        cname, dim, coords = rng.choice(charts)
        entries = [[None] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(i, dim):
                e = Expr.const(Fr(rng.randint(-3, 3), rng.randint(1, 3)))
                if rng.random() < 0.6:
                    e = e + Expr.var(rng.choice(coords)) * rng.randint(1, 2)
                entries[i][j] = entries[j][i] = e
        name = f"h{bi}"
        decls.append(BivectorDecl(name, cname, tuple(tuple(r) for r in entries)))
        bivs.append((name, cname, dim, coords))
    scalars = []
    for si in range(rng.randint(0, 2)):
        cname, dim, coords = rng.choice(charts)
        name = f"f{si}"
        value = parse_expr(f"{rng.randint(-2, 2)}") + Expr.var(rng.choice(coords)) ** rng.randint(1, 3)
        decls.append(ScalarDecl(name, cname, value))
        scalars.append((name, cname))
    for mi in range(rng.randint(0, 2)):
        (sname, sdim, _), (tname, tdim, _) = rng.choice(charts), rng.choice(charts)
        matrix = tuple(tuple(Fr(rng.randint(-2, 2)) for _ in range(sdim)) for _ in range(tdim))
        offset = tuple(Fr(rng.randint(-1, 1)) for _ in range(tdim))
        decls.append(MapDecl(f"F{mi}", sname, tname, matrix, offset))
    for ni in range(rng.randint(0, 2)):
        cname, dim, _ = rng.choice(charts)
        k = rng.randint(0, dim)
        basis = tuple(tuple(Fr(1 if i == j else 0) for j in range(dim)) for i in range(k))
        origin = tuple(Fr(rng.randint(-1, 1)) for _ in range(dim))
        decls.append(SubmanifoldDecl(f"N{ni}", cname, origin, basis))
    if rng.random() < 0.5:
        decls.append(
            AlgebraDecl(
                "A0",
                2,
                (((1, 1, 1), Fr(1)), ((1, 2, 2), Fr(rng.randint(-2, 2)))),
                (((1, 1), Fr(1, 2)),) if rng.random() < 0.5 else (),
            )
        )
    for name, cname, dim, coords in bivs:
        opts = CheckOptions()
        if rng.random() < 0.4:
            opts = CheckOptions(samples=rng.randint(1, 9))
        if rng.random() < 0.2:
            opts = CheckOptions(expect="fail")
        checks.append(CheckDirective("codazzi", (name,), opts))
    for sname, scname in scalars:
        match = [b for b in bivs if b[1] == scname]
        if match:
            checks.append(CheckDirective("in_E", (match[0][0], sname), CheckOptions()))
    return Scenario(tuple(decls), tuple(checks))


def test_round_trip_on_generated_scenarios():
    rng = random.Random(61)
    for _ in range(100):
        s = _random_scenario(rng)
        text = serialize(s)
        assert parse_scenario(text) == s
        # serialization itself is stable
        assert serialize(parse_scenario(text)) == text


def test_options_round_trip():
    text = (
        "manifold M { dim 2 coords [x y] } bivector h on M { [x, 0; 0, y] } "
        "scalar f on M = x "
        "submanifold N in M { origin [0, 0] basis [1, 0] } "
        "check transversal N h { samples 3 points [1, 0; 1/2, 0] expect pass } "
        "check lie_derivative h f { entry 1 1 -x } "
        "algebra A { dim 2 product { 1 1 1 : 1 } cocycle { 2 2 : -1/3 } } "
        "check annihilator A { kind ideal basis [0, 1] }"
    )
    s = parse_scenario(text)
    assert parse_scenario(serialize(s)) == s
    opts = s.checks[0].options
    assert opts.samples == 3 and opts.points == ((Fr(1), Fr(0)), (Fr(1, 2), Fr(0)))
    assert s.checks[1].options.entries[0][2] == -Expr.var("x")


def test_render_report_json_schema_and_stability():
    results = [
        CheckOutcome("h", "codazzi", "pass", None, "ok"),
        CheckOutcome("h2", "codazzi", "fail", Witness(("1/2", "-3"), "-x"), "defect at (1,2,2)"),
        CheckOutcome("N,h", "transversal", "pointwise-pass", None, "sampled"),
    ]
    out1 = render_report(results, "json")
    out2 = render_report(results, "json")
    assert out1 == out2
    payload = json.loads(out1)
    assert set(payload) == {"checks"}
    first = payload["checks"][0]
    assert set(first) == {"name", "kind", "status", "witness", "details"}
    assert payload["checks"][1]["witness"] == {"point": ["1/2", "-3"], "residual": "-x"}
    text = render_report(results, "text")
    assert "pointwise-pass" in text
    assert render_report([], "text") == "no checks\n"
    with pytest.raises(ValueError):
        render_report(results, "yaml")


def test_scenario_comments_and_whitespace_insensitivity():
    a = parse_scenario("manifold M { dim 1 coords [x] }  # trailing comment")
    b = parse_scenario("# leading comment\nmanifold M {\n  dim 1\n  coords [x]\n}")
    assert a == b
