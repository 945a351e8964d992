"""Line-oriented circuit files.

Grammar, one instruction per line (``#`` starts a comment)::

    ADD <label>
    <GATE>[(<params>)] <label> ...
    BB(<bA>,<bB>) <A> <B> <C>
    MEAS <label> -> <cbit>
    RESET <label>
    DISCARD <label>
    CHECK <tag>

Any instruction except CHECK may end with ``IF <cbit>``.  Gate names are
those of ``gates.GATE_TABLE``; angles are in radians and may use ``pi``
(e.g. ``RZ(-pi/4) A``).  ``CU(<axis>,<angle>)`` is the controlled rotation,
``S(<phi>)`` the phase gate diag(1, e^{i phi}); ``S`` alone means phi = pi/2.
"""
from __future__ import annotations

import ast
import math
import operator
import re

from . import network as net
from .gates import GATE_TABLE, gate_by_name
from .network import parity_black_box

_LINE = re.compile(
    r"""^(?P<op>[A-Za-z][A-Za-z0-9_]*)
        (?:\((?P<params>[^)]*)\))?
        (?P<rest>.*)$""",
    re.VERBOSE,
)
_LABEL = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line, self.column, self.message = line, column, message
        super().__init__(f"line {line}, column {column}: {message}")


def eval_angle(text: str) -> float:
    """Evaluate a numeric expression over +, -, *, / and the constant ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported expression {text!r}")

    return ev(ast.parse(text.strip(), mode="eval"))


def _parse_line(text: str, lineno: int) -> net.Instruction | None:
    body = text.split("#", 1)[0]
    stripped = body.strip()
    if not stripped:
        return None
    col0 = len(body) - len(body.lstrip()) + 1

    def err(msg, col=col0):
        return ParseError(lineno, col, msg)

    m = _LINE.match(stripped)
    if not m:
        raise err("expected an instruction")
    op = m.group("op").upper()
    params_text = m.group("params")
    words = m.group("rest").split()

    condition = None
    if len(words) >= 2 and words[-2].upper() == "IF":
        condition = words[-1]
        words = words[:-2]
        if not _LABEL.match(condition):
            raise err(f"bad classical bit name {condition!r}")

    rest_col = col0 + len(stripped) - len(m.group("rest")) + 1
    for w in words if op != "CHECK" else ():
        if w != "->" and not _LABEL.match(w):
            raise err(f"bad label {w!r}", rest_col + m.group("rest").find(w) - 1)

    if op in ("ADD", "RESET", "DISCARD", "CHECK"):
        if params_text is not None or len(words) != 1:
            raise err(f"{op} takes exactly one name")
        if op == "CHECK":
            if condition is not None:
                raise err("CHECK cannot be conditioned")
            return net.checkpoint(words[0])
        if op == "ADD":
            if condition is not None:
                raise err("ADD cannot be conditioned")
            return net.add(words[0])
        return (net.reset if op == "RESET" else net.discard)(words[0], condition=condition)

    if op == "MEAS":
        if params_text is not None or len(words) != 3 or words[1] != "->":
            raise err("expected MEAS <label> -> <cbit>")
        return net.meas(words[0], words[2], condition=condition)

    if op == "BB":
        try:
            bits = [int(p) for p in (params_text or "").split(",")]
        except ValueError:
            raise err("BB parameters must be two bits") from None
        if len(bits) != 2 or any(b not in (0, 1) for b in bits) or len(words) != 3:
            raise err("expected BB(<bA>,<bB>) <A> <B> <C>")
        return net.gate(parity_black_box(*bits), *words, condition=condition)

    if op not in GATE_TABLE:
        raise err(f"unknown gate {m.group('op')!r}")
    arity, n_params = GATE_TABLE[op]
    raw = [p.strip() for p in params_text.split(",")] if params_text else []
    if op == "S" and not raw:
        raw = ["pi/2"]
    if len(raw) != n_params:
        raise err(f"{op} takes {n_params} parameter(s), got {len(raw)}")
    try:
        if op == "CU":
            if raw[0].lower() not in ("x", "y", "z"):
                raise ValueError(f"CU axis must be x, y or z, got {raw[0]!r}")
            params = [raw[0].lower(), eval_angle(raw[1])]
        else:
            params = [eval_angle(p) for p in raw]
    except (ValueError, SyntaxError) as e:
        raise err(f"bad parameter: {e}") from None
    if len(words) != arity:
        raise err(f"{op} acts on {arity} qubit(s), got {len(words)}")
    return net.gate(gate_by_name(op, params), *words, condition=condition)


def parse_circuit(text: str) -> net.Network:
    instructions = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        ins = _parse_line(line, lineno)
        if ins is not None:
            instructions.append(ins)
    return net.Network(instructions)


def format_instruction(ins: net.Instruction) -> str:
    if ins.kind == net.CHECKPOINT:
        return f"CHECK {ins.tag}"
    if ins.kind == net.ADD:
        line = f"ADD {ins.targets[0]}"
    elif ins.kind == net.MEASURE:
        line = f"MEAS {ins.targets[0]} -> {ins.cbit}"
    elif ins.kind in (net.RESET, net.DISCARD):
        line = f"{ins.kind.upper()} {ins.targets[0]}"
    elif ins.kind == net.GATE:
        g = ins.gate
        if g.name not in GATE_TABLE and g.name != "BB":
            raise ValueError(f"gate {g.name!r} has no circuit-file spelling")
        params = f"({','.join(repr(p) if isinstance(p, float) else str(p) for p in g.params)})" if g.params else ""
        line = f"{g.name}{params} {' '.join(ins.targets)}"
    else:
        raise ValueError(f"{ins.kind} instructions have no circuit-file spelling")
    if ins.condition is not None:
        line += f" IF {ins.condition}"
    return line


def format_circuit(network: net.Network) -> str:
    return "\n".join(format_instruction(i) for i in network.instructions) + "\n"
