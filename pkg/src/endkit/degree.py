"""Symbolic degree ledger for proper maps between surfaces.

A :class:`MapDescriptor` records what is known about a proper map: evidence
flags (properness, surjectivity, boundary behaviour, whether the map is a
proper homotopy equivalence or merely a pseudo one) and the absolute value
of its degree where determined.  :func:`infer_degree` closes a descriptor
under the implications that tie these together, raising when they clash.
Degrees are tracked only up to sign; a sign enters the ledger solely
through :func:`degree_from_disk_witness`.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, replace

from .errors import BoundaryCountMismatchError, DegreeContradictionError, DegreeError


@dataclass(frozen=True)
class MapDescriptor:
    """Evidence about one proper map, to be closed under inference.

    Boolean flags mean "known to hold"; the tri-state fields
    ``surjective`` and ``ends_map_injective`` distinguish known-false from
    unknown, because a known failure is itself load-bearing evidence.
    """

    proper: bool = False
    surjective: bool | None = None
    boundary_embedding: tuple[int, int] | None = None
    proper_homotopy_equivalence: bool = False
    pseudo_phe: bool = False
    target_plane_or_punctured_plane: bool = False
    ends_map_injective: bool | None = None
    orientation: int | None = None
    abs_degree: int | None = None
    pi1_surjective: bool = False

    def __post_init__(self) -> None:
        if self.boundary_embedding is not None:
            b1, b2 = self.boundary_embedding
            object.__setattr__(self, "boundary_embedding", (int(b1), int(b2)))
        if self.orientation not in (None, 1, -1):
            raise DegreeError(f"orientation must be +1 or -1, got {self.orientation!r}")
        if self.abs_degree is not None and self.abs_degree < 0:
            raise DegreeError(f"absolute degree cannot be negative: {self.abs_degree}")


def deg_compose(d1: int, d2: int) -> int:
    """Degree of a composite map: degrees multiply."""
    return d1 * d2


def degree_from_disk_witness(orientation_preserving: bool) -> int:
    """Sign of a degree-one map certified by a good disk preimage.

    The caller certifies a disk whose preimage is a single disk mapped
    homeomorphically; the witness data itself is not re-derived here.
    """
    return 1 if orientation_preserving else -1


def _set(desc: MapDescriptor, field: str, value) -> MapDescriptor:
    current = getattr(desc, field)
    if current == value:
        return desc
    if current is not None and not (current is False and value is True and field in _FLAGS):
        raise DegreeContradictionError(
            f"{field} forced to {value!r} but already {current!r}"
        )
    return replace(desc, **{field: value})


# Plain evidence flags where False means unknown, so strengthening to True
# is narrowing, not a clash.  Tri-state fields are deliberately absent.
_FLAGS = {"proper", "pseudo_phe", "pi1_surjective"}


def infer_degree(descriptor: MapDescriptor) -> MapDescriptor:
    """Close a descriptor under the degree implications.

    The rules only narrow what is known, so the result is a fixpoint and a
    second application changes nothing:

    * a proper homotopy equivalence is a pseudo one, and a pseudo one is
      proper;
    * a known non-surjective map has degree 0;
    * a boundary embedding needs matching boundary counts and forces
      absolute degree 1;
    * a proper homotopy equivalence has absolute degree 1, and so does a
      pseudo one unless the target is the plane or the punctured plane;
    * a proper homotopy equivalence acts injectively on ends;
    * non-zero degree forces surjectivity, and absolute degree 1 forces
      surjectivity on loops.
    """
    desc = descriptor
    while True:
        before = desc
        if desc.proper_homotopy_equivalence:
            desc = _set(desc, "pseudo_phe", True)
        if desc.pseudo_phe:
            desc = _set(desc, "proper", True)
        if desc.surjective is False:
            desc = _set(desc, "abs_degree", 0)
        if desc.boundary_embedding is not None:
            b1, b2 = desc.boundary_embedding
            if b1 != b2:
                raise BoundaryCountMismatchError(
                    f"boundary embedding needs equal boundary counts, got {b1} and {b2}"
                )
            desc = _set(desc, "abs_degree", 1)
        if desc.proper_homotopy_equivalence:
            desc = _set(desc, "abs_degree", 1)
            if desc.ends_map_injective is False:
                raise DegreeContradictionError(
                    "a proper homotopy equivalence is injective on ends"
                )
        if desc.pseudo_phe and not desc.target_plane_or_punctured_plane:
            desc = _set(desc, "abs_degree", 1)
        if desc.abs_degree is not None and desc.abs_degree >= 1:
            desc = _set(desc, "surjective", True)
        if desc.abs_degree == 1:
            desc = _set(desc, "pi1_surjective", True)
        if desc == before:
            return desc


def descriptor_to_json(descriptor: MapDescriptor) -> dict:
    return {
        "proper": descriptor.proper,
        "surjective": descriptor.surjective,
        "boundary_embedding": (
            list(descriptor.boundary_embedding)
            if descriptor.boundary_embedding is not None
            else None
        ),
        "proper_homotopy_equivalence": descriptor.proper_homotopy_equivalence,
        "pseudo_phe": descriptor.pseudo_phe,
        "target_plane_or_punctured_plane": descriptor.target_plane_or_punctured_plane,
        "ends_map_injective": descriptor.ends_map_injective,
        "orientation": descriptor.orientation,
        "abs_degree": descriptor.abs_degree,
        "pi1_surjective": descriptor.pi1_surjective,
    }


def descriptor_from_json(data: Mapping) -> MapDescriptor:
    """Rebuild a descriptor from its JSON form; absent keys stay unknown."""
    try:
        boundary = data.get("boundary_embedding")
        return MapDescriptor(
            proper=bool(data.get("proper", False)),
            surjective=data.get("surjective"),
            boundary_embedding=tuple(boundary) if boundary is not None else None,
            proper_homotopy_equivalence=bool(
                data.get("proper_homotopy_equivalence", False)
            ),
            pseudo_phe=bool(data.get("pseudo_phe", False)),
            target_plane_or_punctured_plane=bool(
                data.get("target_plane_or_punctured_plane", False)
            ),
            ends_map_injective=data.get("ends_map_injective"),
            orientation=data.get("orientation"),
            abs_degree=data.get("abs_degree"),
            pi1_surjective=bool(data.get("pi1_surjective", False)),
        )
    except DegreeError:
        raise
    except (TypeError, ValueError) as exc:
        raise DegreeError(f"malformed map descriptor: {exc}") from exc
