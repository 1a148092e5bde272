"""Nice colourings of triangulated spheres and related planar tilings."""

from .coloring import Coloring, ColoringError, is_nice_coloring, search_nice_coloring
from .generators import icosahedral_subdivision, octahedron, tetrahedron, torus_grid
from .mesh import MeshError, TriMesh, build_mesh, from_rotation, mesh_from_dict, mesh_to_dict

__version__ = "0.1.0"

__all__ = [
    "Coloring", "ColoringError", "MeshError", "TriMesh", "build_mesh", "from_rotation",
    "icosahedral_subdivision", "is_nice_coloring", "mesh_from_dict", "mesh_to_dict",
    "octahedron", "search_nice_coloring", "tetrahedron", "torus_grid",
]
