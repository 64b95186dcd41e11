"""Regenerate src/qmendo/data/c1.curve and c2.curve by exact expansion with sympy.

    python scripts/make_fixtures.py
"""

from pathlib import Path

import sympy as sp

X, S = sp.symbols("X S")  # S stands for the square root of the base field tag

CURVES = {
    "c1": (
        2,
        (X**2 + 5)
        * ((sp.Rational(-1, 6) + S) * X**4 + 20 * X**3 - sp.Rational(490, 6) * X**2
           + 100 * X + 25 * (sp.Rational(-1, 6) - S)),
        "Y^2 = (X^2 + 5)((-1/6 + sqrt2) X^4 + 20 X^3 - 490/6 X^2 + 100 X + 25(-1/6 - sqrt2))",
    ),
    "c2": (
        1,
        (X**2 + sp.Rational(7, 2))
        * (sp.Rational(83, 30) * X**4 + 14 * X**3 - sp.Rational(1519, 30) * X**2
           + 49 * X - sp.Rational(1813, 120)),
        "Y^2 = (X^2 + 7/2)(83/30 X^4 + 14 X^3 - 1519/30 X^2 + 49 X - 1813/120)",
    ),
}


def render(d, expr, title):
    poly = sp.Poly(sp.expand(expr), X)
    lines = [f"# {title}", "# generated by scripts/make_fixtures.py", f"d {d}"]
    for k in range(7):
        c = sp.expand(poly.coeff_monomial(X**k))
        u = sp.Rational(c.subs(S, 0))
        v = sp.Rational(sp.expand(c - u).coeff(S))
        lines.append(f"c {k} {u.p}/{u.q} {v.p}/{v.q}")
    return "\n".join(lines) + "\n"


def main():
    out = Path(__file__).resolve().parent.parent / "src" / "qmendo" / "data"
    out.mkdir(parents=True, exist_ok=True)
    for name, (d, expr, title) in CURVES.items():
        (out / f"{name}.curve").write_text(render(d, expr, title), encoding="utf-8")


if __name__ == "__main__":
    main()
