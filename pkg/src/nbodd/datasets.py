"""Small categorical datasets generated from first principles."""

from __future__ import annotations

import csv
from pathlib import Path

SQUARES = (
    "top-left", "top-middle", "top-right",
    "middle-left", "middle-middle", "middle-right",
    "bottom-left", "bottom-middle", "bottom-right",
)
LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)


def _winner(board: tuple[str, ...]) -> str | None:
    for a, b, c in LINES:
        if board[a] != "b" and board[a] == board[b] == board[c]:
            return board[a]
    return None


def tic_tac_toe_endgames() -> list[tuple[tuple[str, ...], str]]:
    """Every final board of a game where ``x`` moves first.

    A board is final when someone has three in a row or no square is blank.
    The class is ``positive`` when ``x`` has three in a row. Boards are
    returned sorted, cells as ``x``/``o``/``b``.
    """
    final: dict[tuple[str, ...], str] = {}
    seen = set()
    stack = [(("b",) * 9, "x")]
    while stack:
        board, player = stack.pop()
        if board in seen:
            continue
        seen.add(board)
        w = _winner(board)
        if w is not None or "b" not in board:
            final[board] = "positive" if w == "x" else "negative"
            continue
        nxt = "o" if player == "x" else "x"
        for i, cell in enumerate(board):
            if cell == "b":
                stack.append((board[:i] + (player,) + board[i + 1:], nxt))
    return sorted(final.items())


def write_tic_tac_toe_csv(path: str | Path) -> int:
    rows = tic_tac_toe_endgames()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*SQUARES, "class"])
        for board, label in rows:
            w.writerow([*board, label])
    return len(rows)
