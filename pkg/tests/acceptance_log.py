"""Collects acceptance outcomes so the pytest summary can print them."""

RESULTS: list[tuple[int, str, bool, str]] = []


def record(num: int, desc: str, ok: bool, detail: str) -> None:
    RESULTS.append((num, desc, ok, detail))
    print(f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {desc} ({detail})")
