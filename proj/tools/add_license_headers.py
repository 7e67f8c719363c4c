#!/usr/bin/env python3
"""Prepends the Apache-2.0 header to project files that lack it."""

import pathlib
import sys

NOTICE = [
    "Copyright 2026 The ropnet Authors",
    "",
    'Licensed under the Apache License, Version 2.0 (the "License");',
    "you may not use this file except in compliance with the License.",
    "You may obtain a copy of the License at",
    "",
    "    http://www.apache.org/licenses/LICENSE-2.0",
    "",
    "Unless required by applicable law or agreed to in writing, software",
    'distributed under the License is distributed on an "AS IS" BASIS,',
    "WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.",
    "See the License for the specific language governing permissions and",
    "limitations under the License.",
]

SKIP_DIRS = {"build", "vendor", "examples", ".git"}


def block(prefix):
    return "".join((prefix + " " + line).rstrip() + "\n" for line in NOTICE) + "\n"


def header_for(path):
    if path.suffix in {".cpp", ".hpp"}:
        return block("//")
    if path.name == "CMakeLists.txt" or path.suffix == ".py":
        return block("#")
    if path.suffix == ".md":
        return "<!--\n" + "".join(("  " + line).rstrip() + "\n" for line in NOTICE) + "-->\n\n"
    return None


def main(root):
    root = pathlib.Path(root)
    for path in sorted(root.rglob("*")):
        if not path.is_file() or SKIP_DIRS.intersection(path.relative_to(root).parts):
            continue
        if path.suffix == ".md" and path.name != "README.md":
            continue
        header = header_for(path)
        if header is None:
            continue
        text = path.read_text(encoding="utf-8")
        if NOTICE[0] in "\n".join(text.splitlines()[:20]):
            continue
        shebang = ""
        if text.startswith("#!"):
            shebang, _, text = text.partition("\n")
            shebang += "\n"
        path.write_text(shebang + header + text, encoding="utf-8")
        print("added header:", path.relative_to(root))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent)
