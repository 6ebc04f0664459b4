"""Premaniplexes as edge-coloured flag graphs: mixing, symmetry, variance
groups and polytopality checks.

Set ``MANIPLEX_PURE_NUMPY=1`` before import to skip the numba kernels.
"""
from .errors import *  # noqa: F401,F403
from .flagcore import (Face, OrbitPartition, Premaniplex, RootedPremaniplex,
                       as_premaniplex, as_rooted, canonical_form, canonical_key,
                       colorset, dual, faces, facet, interval, interval_orbits,
                       is_maniplex, medial_section, section, section_flags,
                       validate, vertex_figure)
from .symmetry import (AutomorphismGroup, TwoOrbitClass, automorphisms,
                       chain_transitive, compose, covering_map, generate_subgroup,
                       i_even_automorphisms, is_I_orientable, is_orientable,
                       is_T_admissible, rooted_isomorphic, symmetry_type_graph,
                       two_orbit_class)
from .mixing import (Covering, MixChain, MixResult, find_covering, i_double, mix,
                     mix_many, orbit_representatives, rebase,
                     smallest_regular_cover)
from .polyvariance import (IDoubleVerdict, PipResult, PolytopalityReport,
                           VarianceGroup, chirality_group_order,
                           i_double_polytopality, pathwise_variance_images,
                           pip_check, pip_check_recursive,
                           section_variance_images, sggi_string_c_check,
                           src_polytopality_report, theorem_mix_polytopality,
                           variance_group_lower)
from . import catalog

__version__ = "0.1.0"
