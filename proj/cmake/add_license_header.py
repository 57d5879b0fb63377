#!/usr/bin/env python3
# Copyright 2026 The fls Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Prepend cmake/license_header.txt to project sources that lack it."""
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
HEADER = (ROOT / "cmake" / "license_header.txt").read_text().rstrip("\n") + "\n"
MARK = "Licensed under the Apache License"
DIRS = ["include", "src", "tools", "tests", "cmake"]
C_LIKE = {".c", ".h", ".cpp", ".hpp"}
HASH = {".sh", ".py"}


def header_for(suffix):
    if suffix in C_LIKE:
        return HEADER
    return "".join("#" + line[2:] + "\n" for line in HEADER.splitlines())


def main():
    changed = 0
    for d in DIRS:
        for path in sorted((ROOT / d).rglob("*")):
            if not path.is_file() or path.suffix not in C_LIKE | HASH:
                continue
            text = path.read_text()
            if MARK in text:
                continue
            head = header_for(path.suffix)
            if text.startswith("#!"):
                first, _, rest = text.partition("\n")
                text = first + "\n" + head + "\n" + rest
            else:
                text = head + "\n" + text
            path.write_text(text)
            changed += 1
    print(f"{changed} files updated")
    return 0


if __name__ == "__main__":
    sys.exit(main())
