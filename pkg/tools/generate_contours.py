"""Regenerate the shipped steepest-descent contours under src/extlaplace/data."""

import json
import pathlib

from extlaplace.contours import EXAMPLES, SHIPPED_THETAS, _data_name, example_contour

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "extlaplace" / "data"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in EXAMPLES:
        for key, theta in SHIPPED_THETAS.items():
            c = example_contour(name, theta)
            obj = c.to_json()
            obj["meta"] = {"example": name, "theta": theta, "levels": c.meta["levels"]}
            path = OUT / _data_name(name, key)
            path.write_text(json.dumps(obj, indent=1) + "\n")
            print(f"{path.name}: {len(c.nodes)} nodes, end {c.nodes[-1]:.4f}")


if __name__ == "__main__":
    main()
