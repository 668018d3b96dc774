"""The bundled corpus of typing judgments and sample files."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from lpimod.builtins import builtin
from lpimod.specification import Specification
from lpimod.surface import ParseError, parse_context, parse_term
from lpimod.syntax import EMPTY, Context, Term


@dataclass(frozen=True)
class Judgment:
    name: str
    system: str
    ctx: Context
    term: Term
    type: Term

    @property
    def spec(self) -> Specification:
        return builtin(self.system)


def parse_corpus(text: str) -> list[Judgment]:
    """Blocks of ``judgment NAME`` followed by ``ctx``, ``term`` and ``type`` lines."""
    system = None
    found: list[Judgment] = []
    current: dict[str, str] = {}

    def flush():
        if not current:
            return
        missing = {"term", "type"} - current.keys()
        if missing:
            raise ParseError(f"judgment {current['judgment']} lacks {', '.join(sorted(missing))}", current["line"], 1)
        spec = builtin(system)
        ctx = parse_context(current["ctx"], spec) if "ctx" in current else EMPTY
        found.append(
            Judgment(
                current["judgment"],
                system,
                ctx,
                parse_term(current["term"], spec),
                parse_term(current["type"], spec),
            )
        )
        current.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "system":
            flush()
            system = rest
        elif key == "judgment":
            flush()
            if system is None:
                raise ParseError("judgment before any system line", lineno, 1)
            current.update(judgment=rest, line=lineno)
        elif key in ("ctx", "term", "type") and current:
            current[key] = rest
        else:
            raise ParseError(f"unexpected corpus line {line!r}", lineno, 1)
    flush()
    return found


def data_path(name: str):
    return resources.files("lpimod") / "data" / name


def data_text(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


def load_corpus() -> list[Judgment]:
    out: list[Judgment] = []
    for entry in sorted(resources.files("lpimod").joinpath("data", "corpus").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".corpus"):
            out += parse_corpus(entry.read_text(encoding="utf-8"))
    return out
