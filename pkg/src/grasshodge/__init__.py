"""Griffiths rings of hypersurfaces and complete intersections in Grassmannians."""
