"""Distinguished affine charts of graded-module varieties over path algebras."""

from .fields import QQ, FieldError, PrimeField, RationalField
from .quiver import (AlgebraElement, Arrow, Path, Quiver, QuiverAlgebra, QuiverError,
                     RelationError, TopSpec, compose, enumerate_paths, left_ideal_generators,
                     parse_element, projective_cover_dimension)
from .skeleta import (ChartVariable, CriticalPair, SemisimpleSequence, Skeleton, SkeletonError,
                      TaggedPath, VariableIndex, count_skeleta, critical_pairs, enumerate_skeleta,
                      layering_of, validate_skeleton, variable_index)
from .polynomials import (MultiPoly, PolyError, PolyRing, eliminate_linear, ideals_equal_bounded,
                          in_ideal_bounded, parse_polynomial)
from .charts import (ChartError, ChartIdeal, ChartReport, ReductionError, chart_ideal,
                     dimension_report, normal_form, specialize_to_graded, ungraded_chart_ideal)
from .oracle import (OracleError, OracleReport, PartitionClass, Representation,
                     SubmodulePresentation, cover_basis, finest_slot_blocks, instantiate,
                     membership_vs_oracle, partition_classes, radical_layering,
                     satisfies_relations, slot_aligned_summand_count, slot_split_summands,
                     submodule_from_point, submodule_from_vectors, top_degeneration)
from .problem import (BUNDLED, ProblemError, ProblemSpec, bundled_problem, distinguished_skeleton,
                      load_problem, problem_from_dict, realize_variety)
from .report import PipelineOptions, PipelineResult, run_pipeline, write_report

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
