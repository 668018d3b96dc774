"""Expand the definitions of Hurkens' paradox into a single U-minus term."""

import re
import sys


# definitions in dependency order; later ones may mention earlier names
MACROS = [
    ("bot", "(!p:Prop. p)"),
    ("pU", "(U -> Prop)"),
    ("ppU", "((U -> Prop) -> Prop)"),
    ("U", "(!X:Type. (((X -> Prop) -> Prop) -> X) -> ((X -> Prop) -> Prop))"),
    ("tau", r"(\t:ppU. \X:Type. \f:(((X -> Prop) -> Prop) -> X). \p:(X -> Prop). t (\x:U. p (f (x X f))))"),
    ("sigma", r"(\s:U. s U (\t:ppU. tau t))"),
    ("Delta", r"(\y:U. (!p:pU. sigma y p -> p (tau (sigma y))) -> bot)"),
    ("Omega", r"(tau (\p:pU. !x:U. sigma x p -> p x))"),
    ("D", r"(!p:pU. sigma Omega p -> p (tau (sigma Omega)))"),
    ("lemA", r"(\p:pU. \h1:(!x:U. sigma x p -> p x). h1 Omega (\x:U. h1 (tau (sigma x))))"),
    ("lemB", r"(lemA Delta (\x:U. \h2:sigma x Delta. \h3:(!p:pU. sigma x p -> p (tau (sigma x))). h3 Delta h2 (\p:pU. h3 (\y:U. p (tau (sigma y))))))"),
    ("lemC", r"(\p:pU. lemA (\y:U. p (tau (sigma y))))"),
    ("loop", "(lemB lemC)"),
]


def expand(text: str) -> str:
    table = dict(MACROS)
    for _ in range(len(MACROS) + 1):
        new = re.sub(r"\b[A-Za-z][A-Za-z0-9_]*\b", lambda m: table.get(m.group(), m.group()), text)
        if new == text:
            return text
        text = new
    raise RuntimeError("macro expansion did not converge")


if __name__ == "__main__":
    sys.stdout.write(expand(sys.argv[1] if len(sys.argv) > 1 else "loop") + "\n")
