"""prefkit: finite toolkit for choice functions, preferential structures,
belief revision, distance-based revision and size-based reasoning."""
