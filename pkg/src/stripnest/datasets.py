"""Dataset model, JSON I/O and bundled benchmark instances."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import List, Sequence, Tuple, Union

from .geometry import Piece, Polygon, validate_and_normalize


@dataclass
class Dataset:
    name: str
    strip_width: float
    rotations: Union[Tuple[float, ...], str]  # tuple of degrees or "free"
    pieces: List[Piece]

    @property
    def total_quantity(self) -> int:
        return sum(p.quantity for p in self.pieces)

    @property
    def total_area(self) -> float:
        from .geometry import area

        return sum(area(p.polygon) * p.quantity for p in self.pieces)


def dataset_from_dict(data: dict) -> Dataset:
    rotations = data["rotations"]
    if rotations != "free":
        rotations = tuple(float(a) for a in rotations)
    pieces = []
    for entry in data["pieces"]:
        poly = validate_and_normalize(entry["vertices"])
        pieces.append(
            Piece(
                id=str(entry["id"]),
                polygon=poly,
                quantity=int(entry["quantity"]),
                rotations=rotations,
            )
        )
    return Dataset(
        name=str(data["name"]),
        strip_width=float(data["strip_width"]),
        rotations=rotations,
        pieces=pieces,
    )


def dataset_to_dict(ds: Dataset) -> dict:
    return {
        "name": ds.name,
        "strip_width": ds.strip_width,
        "rotations": "free" if ds.rotations == "free" else list(ds.rotations),
        "pieces": [
            {
                "id": p.id,
                "quantity": p.quantity,
                "vertices": [[x, y] for x, y in p.polygon.vertices],
            }
            for p in ds.pieces
        ],
    }


def load_dataset(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return dataset_from_dict(json.load(fh))


def save_dataset(ds: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_to_dict(ds), fh, indent=1)


BUNDLED = ("shirts", "trousers", "swim", "han", "jakob2", "poly5b")


def load_bundled(name: str) -> Dataset:
    if name not in BUNDLED:
        raise KeyError(f"unknown bundled dataset {name!r}; have {BUNDLED}")
    ref = resources.files("stripnest").joinpath(f"data/{name}.json")
    return dataset_from_dict(json.loads(ref.read_text(encoding="utf-8")))
