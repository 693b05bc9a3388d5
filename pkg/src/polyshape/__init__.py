"""Shapes on polygraphs: enumeration, canonical forms, substitution
closures, and the free polycategory / properad / prop machinery.

The submodules layer up: polygraph (presheaves and their colimits),
cellular (buildability and minimal extensions), labelled (shapes and
grafting), canon (canonical forms and automorphisms), shapes
(recognizers and brute-force enumeration), functors (shapely functors,
free monads, evaluation, spectra), freestruct (free structures and the
axiom checker), workspace/cli (the batch front end).
"""

from .canon import (CanonicalForm, PermGroup, are_isomorphic, canonical_form,
                    clear_caches, label_preserving_automorphisms, orbit_equal,
                    orbit_morphism_valid, shape_digest, trivial_group)
from .cellular import (Bordage, CellCertificate, NoExtension,
                       NotConstructible, WellLabelled, is_finite_complex,
                       is_relative_complex, minimal_extension, replay,
                       standard_bordage, well_labelled)
from .functors import (KINDS, POLYCAT, EvalClass, Evaluation, ShapelyFunctor,
                       SpectrumData, SpectrumEntry, clear_memos, evaluate,
                       free_monad, from_shapes, identity_functor, join, leq,
                       sigma_polycat, sigma_prop, sigma_properad, spectrum,
                       substitute, universal_spectrum)
from .freestruct import (AxiomReport, AxiomResult, FreeStructure, Morphism,
                         check_axioms, compose, empty_morphism, exchange,
                         free_structure, identity, juxtapose_morphisms,
                         multi_compose, random_base)
from .labelled import (LabelledShape, corolla, empty_shape, graft,
                       identity_shape, juxtapose, make_shape, multi_graft,
                       relabel)
from .polygraph import (MODES, PLANAR, SYMMETRIC, Edge, EdgeImage,
                        Polygraph, PolyMorphism, automorphisms,
                        compose_morphisms, coproduct, discrete, hom,
                        identity_morphism, invert_morphism, is_mono,
                        make_polygraph, morphism_errors, pushout_discrete,
                        quotient)
from .shapes import (PROP, PROPERAD, TREE, body_boundary,
                     enumerate_class_shapes, enumerate_shapes,
                     incidence_graph, is_polycat_tree, is_prop_graph,
                     is_properadic_graph)
from .workspace import ParseError, Workspace, parse, parse_file, serialize

__version__ = "0.1.0"
