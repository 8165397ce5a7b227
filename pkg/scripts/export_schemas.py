#!/usr/bin/env python3
"""Export the JSON Schemas of the CLI inputs and outputs to schemas/.

The schemas are generated from the pydantic models in `nablavar.state`,
which the CLI uses to validate its inputs and serialize its outputs.
"""

from __future__ import annotations

import json
from pathlib import Path


def main() -> None:
    """Write one `<name>.schema.json` file per model."""
    from nablavar.state import SCHEMA_MODELS

    output_dir = Path(__file__).parent.parent / "schemas"
    output_dir.mkdir(parents=True, exist_ok=True)
    for name, model in SCHEMA_MODELS.items():
        path = output_dir / f"{name}.schema.json"
        path.write_text(json.dumps(model.model_json_schema(), indent=2) + "\n", encoding="utf-8")
        print(f"Wrote {path}")  # noqa: T201


if __name__ == "__main__":
    main()
