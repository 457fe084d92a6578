"""Structured outcomes for verification runs.

Every check is either theorem-level (a proved identity; failure means a bug
or a refutation of something proved, exit code 3 at the CLI) or
conjecture-level (an experimentally supported identity; failure is a genuine
finding, exit code 4).  Passing items report "verified" or
"conjecture-supported" accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

VERIFIED = "verified"
SUPPORTED = "conjecture-supported"
REFUTED = "REFUTED"
ERROR = "error"

THEOREM = "theorem"
CONJECTURE = "conjecture"


@dataclass
class CheckItem:
    name: str
    status: str
    detail: str = ""

    def ok(self) -> bool:
        return self.status in (VERIFIED, SUPPORTED)

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class CheckReport:
    title: str
    kind: str = THEOREM
    items: list[CheckItem] = field(default_factory=list)

    def add_pass(self, name: str, detail: str = "") -> None:
        status = VERIFIED if self.kind == THEOREM else SUPPORTED
        self.items.append(CheckItem(name, status, detail))

    def add_fail(self, name: str, detail: str = "") -> None:
        self.items.append(CheckItem(name, REFUTED, detail))

    def add_error(self, name: str, detail: str = "") -> None:
        self.items.append(CheckItem(name, ERROR, detail))

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        if passed:
            self.add_pass(name, detail)
        else:
            self.add_fail(name, detail)

    @property
    def all_ok(self) -> bool:
        return all(item.ok() for item in self.items)

    @property
    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.ok()]

    def summary(self) -> str:
        n_ok = sum(1 for i in self.items if i.ok())
        verdict = "ok" if self.all_ok else "FAILED"
        return f"{self.title}: {n_ok}/{len(self.items)} checks passed [{verdict}]"

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "kind": self.kind,
            "ok": self.all_ok,
            "items": [item.to_json() for item in self.items],
        }
