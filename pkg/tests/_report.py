"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def record(number: int, title: str, failures: list, detail: str = "") -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    if failures:
        line += f" -- {len(failures)} failure(s), first: {failures[0]}"
    LINES.append(line)
    print(line)
