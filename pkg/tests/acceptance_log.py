"""One summary line per acceptance criterion, filled in by test_acceptance."""

LINES: dict[int, str] = {}
