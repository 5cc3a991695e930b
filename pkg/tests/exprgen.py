"""Random well-conditioned expressions and a plain-float oracle evaluator.

The oracle walks the AST with the ``math`` module only, so it shares no
arithmetic with the jet path it checks.
"""

import math

import numpy as np

from shellbend.surface_lang import Binary, Call, Name, Number, Unary

_MATH = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
    "log": math.log, "sqrt": math.sqrt, "sinh": math.sinh, "cosh": math.cosh,
    "tanh": math.tanh, "asin": math.asin, "acos": math.acos, "atan": math.atan,
}
_CONST = {"pi": math.pi, "e": math.e}


def float_eval(node, xi1, xi2, params=None):
    params = params or {}
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Name):
        if node.name == "xi1":
            return xi1
        if node.name == "xi2":
            return xi2
        if node.name in _CONST:
            return _CONST[node.name]
        return params[node.name]
    if isinstance(node, Unary):
        return -float_eval(node.operand, xi1, xi2, params)
    if isinstance(node, Call):
        return _MATH[node.func](float_eval(node.arg, xi1, xi2, params))
    a = float_eval(node.left, xi1, xi2, params)
    b = float_eval(node.right, xi1, xi2, params)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return a ** b


def _leaf(rng):
    r = rng.random()
    if r < 0.35:
        return "xi1"
    if r < 0.7:
        return "xi2"
    if r < 0.75:
        return "pi"
    return repr(round(float(rng.uniform(0.1, 2.0)), 3))


# each wrapper keeps its argument inside the function's domain
_GUARDED = (
    "sin({})", "cos({})", "atan({})", "tanh({})",
    "exp(0.5*sin({}))", "log(1 + ({})^2)", "sqrt(1 + ({})^2)",
    "asin(0.5*tanh({}))", "acos(0.5*tanh({}))", "tan(0.5*tanh({}))",
    "sinh(tanh({}))", "cosh(tanh({}))",
)


def random_expression(rng, depth=4):
    if depth == 0 or rng.random() < 0.2:
        return _leaf(rng)
    sub = lambda: random_expression(rng, depth - 1)  # noqa: E731
    k = rng.integers(0, 9)
    if k == 0:
        return f"({sub()} + {sub()})"
    if k == 1:
        return f"({sub()} - {sub()})"
    if k == 2:
        return f"({sub()} * {sub()})"
    if k == 3:
        return f"{sub()} / (2 + cos({sub()}))"
    if k == 4:
        return f"({sub()})^{int(rng.integers(2, 4))}"
    if k == 5:
        return f"(1 + ({sub()})^2)^{rng.choice(['0.5', '-1.5', '1.25'])}"
    if k == 6:
        return f"-{_leaf(rng)} * {sub()}"
    return rng.choice(_GUARDED).format(sub())


def finite_difference(f, x1, x2, h_grad=1e-4, h_hess=1e-3):
    """Central-difference gradient and Hessian of a scalar function."""
    grad = np.array([
        (f(x1 + h_grad, x2) - f(x1 - h_grad, x2)) / (2 * h_grad),
        (f(x1, x2 + h_grad) - f(x1, x2 - h_grad)) / (2 * h_grad),
    ])
    h = h_hess
    f0 = f(x1, x2)
    h11 = (f(x1 + h, x2) - 2 * f0 + f(x1 - h, x2)) / h ** 2
    h22 = (f(x1, x2 + h) - 2 * f0 + f(x1, x2 - h)) / h ** 2
    h12 = (f(x1 + h, x2 + h) - f(x1 + h, x2 - h) - f(x1 - h, x2 + h) + f(x1 - h, x2 - h)) / (4 * h ** 2)
    return grad, np.array([[h11, h12], [h12, h22]])


def rel_error(approx, exact):
    """Max-norm error scaled by ``1 + max|exact|``."""
    approx, exact = np.asarray(approx), np.asarray(exact)
    return float(np.max(np.abs(approx - exact)) / (1.0 + np.max(np.abs(exact))))
