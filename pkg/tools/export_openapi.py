#!/usr/bin/env python3
"""Write the service's OpenAPI description to docs/openapi.json."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from vizcheck.service import create_app  # noqa: E402


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "docs" / "openapi.json"
    out.parent.mkdir(exist_ok=True)
    schema = create_app().openapi()
    out.write_text(json.dumps(schema, indent=2) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
