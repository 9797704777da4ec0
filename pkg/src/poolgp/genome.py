"""Linear prefix-encoded program trees: growth, crossover, interpretation.

A genome is a sequence of one-byte opcodes laid out in prefix (Polish)
order inside a fixed-length buffer. Four arity-2 arithmetic functions, one
input variable and a small table of constants keep every node in a single
byte, so subtree extents fall out of a plain arity walk.
"""

from __future__ import annotations

import numpy as np

# function opcodes, all arity 2
ADD = 0
SUB = 1
MUL = 2
DIV = 3  # protected: x/0 evaluates to 1.0

# terminal opcodes
VAR_X = 4
CONST_BASE = 5
CONSTANTS = (-1.0, -0.5, 0.0, 0.5, 1.0)

FUNCTIONS = (ADD, SUB, MUL, DIV)
TERMINALS = (VAR_X,) + tuple(CONST_BASE + i for i in range(len(CONSTANTS)))
PRIMITIVES = FUNCTIONS + TERMINALS

CROSSOVER_ATTEMPTS = 10


def arity(op: int) -> int:
    return 2 if op < VAR_X else 0


def subtree_end(code, start: int) -> int:
    """Index one past the subtree rooted at `start` (arity walk)."""
    need = 1
    i = start
    while need:
        need += arity(code[i]) - 1
        i += 1
    return i


def tree_is_complete(code, length: int) -> bool:
    """True when the arity walk from cell 0 ends exactly at `length`."""
    try:
        return length > 0 and subtree_end(code, 0) == length
    except IndexError:
        return False


def random_tree(rng, depth_limit: int, buf) -> int:
    """Grow a random tree into `buf`, returning its encoded length.

    The root is a function whenever the depth limit allows one; deeper nodes
    are drawn uniformly from the full primitive set until the limit forces a
    terminal. A limit of d writes at most 2**d - 1 cells.
    """
    assert depth_limit >= 1
    pos = 0

    def grow(depth: int) -> None:
        nonlocal pos
        if depth >= depth_limit:
            op = TERMINALS[rng.randrange(len(TERMINALS))]
        elif depth == 1:
            op = FUNCTIONS[rng.randrange(len(FUNCTIONS))]
        else:
            op = PRIMITIVES[rng.randrange(len(PRIMITIVES))]
        buf[pos] = op
        pos += 1
        for _ in range(arity(op)):
            grow(depth + 1)

    grow(1)
    return pos


def subtree_crossover(mum, mum_len: int, dad, dad_len: int,
                      child, capacity: int, rng) -> int:
    """Copy mum into `child` with one mum subtree replaced by one dad subtree.

    Crossover points are uniform over node positions. If the offspring would
    not fit in `capacity` cells, new points are drawn up to a bounded number
    of attempts; after that the child is a verbatim copy of mum. Parents are
    only read.
    """
    for _ in range(CROSSOVER_ATTEMPTS):
        mp = rng.randrange(mum_len)
        dp = rng.randrange(dad_len)
        m_end = subtree_end(mum, mp)
        d_end = subtree_end(dad, dp)
        new_len = mum_len - (m_end - mp) + (d_end - dp)
        if new_len <= capacity:
            child[:mp] = mum[:mp]
            child[mp:mp + d_end - dp] = dad[dp:d_end]
            child[mp + d_end - dp:new_len] = mum[m_end:mum_len]
            return new_len
    child[:mum_len] = mum[:mum_len]
    return mum_len


def evaluate(code, length: int, x: np.ndarray) -> np.ndarray:
    """Interpret a genome over a vector of input points.

    Right-to-left scan with a value stack: terminals push, functions combine
    the top two entries. Returns the prediction per input point; the result
    may alias `x` for the bare-variable tree, so treat it as read-only.
    """
    stack: list[np.ndarray] = []
    push = stack.append
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i in range(length - 1, -1, -1):
            op = code[i]
            if op == VAR_X:
                push(x)
            elif op >= CONST_BASE:
                push(np.full_like(x, CONSTANTS[op - CONST_BASE]))
            else:
                a = stack.pop()
                b = stack.pop()
                if op == ADD:
                    push(a + b)
                elif op == SUB:
                    push(a - b)
                elif op == MUL:
                    push(a * b)
                else:
                    out = np.ones_like(a)
                    np.divide(a, b, out=out, where=b != 0)
                    push(out)
    assert len(stack) == 1, "incomplete prefix encoding"
    return stack[0]
