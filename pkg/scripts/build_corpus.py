"""Regenerate the bundled corpus files from their constructions."""

from pathlib import Path

from opbkit import corpus

if __name__ == "__main__":
    out = Path(corpus.__file__).parent
    corpus.write_all(out)
    for name in corpus.NAMES:
        print(out / f"{name}.json")
