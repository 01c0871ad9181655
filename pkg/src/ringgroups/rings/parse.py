"""Element expressions such as ``"X^2 + 3*X - 1"`` or ``"(1, 2)"``."""
from __future__ import annotations

import ast

from ..errors import ParseError


def parse_expr(ring, text: str):
    """Parse ``text`` into a raw value of ``ring``."""
    src = text.strip().replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _Eval(ring).visit(tree.body)


class _Eval(ast.NodeVisitor):
    def __init__(self, ring):
        self.ring = ring

    def generic_visit(self, node):
        raise ParseError(f"unsupported syntax: {ast.dump(node)}")

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed, got {node.value!r}")
        return self.ring.from_int(node.value)

    def visit_Name(self, node):
        return self.ring.variable(node.id)

    def visit_Tuple(self, node):
        base = getattr(self.ring, "base", None)
        if self.ring.tag != "Excision" or len(node.elts) != 2:
            raise ParseError("tuples are only meaningful as excision pairs (r, i)")
        sub = _Eval(base)
        return self.ring.canon((sub.visit(node.elts[0]), sub.visit(node.elts[1])))

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return self.ring.neg(v)
        if isinstance(node.op, ast.UAdd):
            return v
        raise ParseError("unsupported unary operator")

    def visit_BinOp(self, node):
        R = self.ring
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ParseError("exponents must be integer literals")
            return R.pow(self.visit(node.left), node.right.value)
        a, b = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return R.add(a, b)
        if isinstance(node.op, ast.Sub):
            return R.sub(a, b)
        if isinstance(node.op, ast.Mult):
            return R.mul(a, b)
        if isinstance(node.op, ast.Div):
            inv = R.inv(b)
            if inv is None:
                raise ParseError(f"division by a non-unit in {R}")
            return R.mul(a, inv)
        raise ParseError("unsupported operator")
