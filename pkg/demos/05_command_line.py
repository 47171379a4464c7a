"""The command-line interface, driven from Python.

The same calls work from a shell as `floorcount ...` or `python3 -m floorcount ...`.
"""

import io
import tempfile

from floorcount.cli import main


def show(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    print(f"$ floorcount {' '.join(argv)}   [exit {code}]")
    print(out.getvalue()[:600].rstrip())


show("count", "--ambient", "p3", "-d", "2", "--delta", "1")
show("count", "--ambient", "p1p1p1", "-d", "5", "-e", "4", "-f", "4", "--delta", "2", "--format", "json")
show("enumerate", "--ambient", "p3", "-d", "2")
show("export", "--ambient", "p2", "-d", "2", "--smooth")
with tempfile.TemporaryDirectory() as cache:
    show("report", "--ambient", "p3", "--delta", "2", "--field", "real", "--grid", "500:2000:500",
         "--cache-dir", cache)
show("report", "--ambient", "p1xp2", "--delta", "1", "--field", "real", "-e", "6", "--grid", "4:8:4")
