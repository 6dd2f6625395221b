"""The example presentations shipped in ``qhfrob/data``."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..exactlin import GF, QQ
from .builders import build_sweedler, c2_algebra, s3_algebra, twisted_z2
from .fileformat import PresentationFile, SubalgebraSpec, presentation_file, serialize_presentation

__all__ = ["shipped_examples", "data_dir", "shipped_paths", "write_shipped_examples"]


def shipped_examples() -> dict[str, PresentationFile]:
    """File name -> document, built from the constructors."""
    s3 = s3_algebra(QQ)
    labels = list(s3.alg.labels)
    c3 = QQ.identity(6)[[labels.index(p) for p in ("012", "120", "201")]]
    sweedler = build_sweedler(QQ)
    grouplike = QQ.identity(4)[[0, 1]]
    return {
        "c2.json": presentation_file(c2_algebra(QQ), "group algebra of the cyclic group of order 2"),
        "s3.json": presentation_file(
            s3,
            "group algebra of S3; basis = permutations in lexicographic order",
            SubalgebraSpec(c3, name="Q[C3] (even permutations)"),
        ),
        "sweedler.json": presentation_file(
            sweedler,
            "Sweedler 4-dim Hopf algebra, g^2 = 1, x^2 = 0, xg = -gx",
            SubalgebraSpec(grouplike, name="span{1, g}"),
        ),
        "twisted_z2.json": presentation_file(
            twisted_z2(QQ), "dual group algebra of Z/2 with associator sum (-1)^(abc) e_a (x) e_b (x) e_c"
        ),
        "c2_f2.json": presentation_file(c2_algebra(GF(2)), "group algebra of C2 in characteristic 2"),
    }


def data_dir() -> Path:
    return Path(str(resources.files("qhfrob") / "data"))


def shipped_paths() -> list[Path]:
    return sorted(data_dir().glob("*.json"))


def write_shipped_examples(directory=None) -> list[Path]:
    directory = Path(directory) if directory is not None else data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for fname, doc in shipped_examples().items():
        path = directory / fname
        path.write_text(serialize_presentation(doc), encoding="utf-8")
        out.append(path)
    return out
