"""Drive the CLI over the whole corpus and print every output in order.

Used by the determinism checks: two separate processes running this script
must print byte-identical text.
"""
import contextlib
import io
import sys
import tempfile
from pathlib import Path

from princerank.cli import main
from princerank.corpus import corpus_ids


def run(argv, shown=None) -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return f"$ princerank {' '.join(shown or argv)}\n[exit {code}]\n{buf.getvalue()}"


def full_run() -> str:
    parts = [run(["triads"]), run(["ideal", "--agents", "4", "--method", "hill-climb", "--restarts", "4"])]
    with tempfile.TemporaryDirectory() as tmp:
        for cid in corpus_ids():
            parts.append(run(["simulate", cid, "--steps", "5"]))
            parts.append(run(["rank", cid, "--agent", "1"]))
            parts.append(run(["render", cid]))
            parts.append(run(["tension", cid]))
            out = Path(tmp) / cid.replace("/", "_")
            argv = ["simulate", cid, "--steps", "2", "--out-dot-dir"]
            parts.append(run(argv + [str(out)], shown=argv + ["DIR"]))
            for f in sorted(out.iterdir()):
                parts.append(f"-- {f.name}\n{f.read_text()}")
    return "".join(parts)


if __name__ == "__main__":
    sys.stdout.write(full_run())
