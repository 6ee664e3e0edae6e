"""Sharded training with exact unlearning.

Thin wrapper over the native module: datasets, partition plans, constituent
training with per-slice checkpoints, checkpoint-based unlearning, analytic
cost reports, and the Monte Carlo validator.
"""

from ._core import (
    DataPoint,
    Dataset,
    Model,
    PartitionPlan,
    SisaError,
    assign_probs,
    combined_report,
    distribution_aware_shard,
    evaluate,
    gen_synthetic,
    load_csv,
    load_model,
    predict,
    save_csv,
    save_model,
    shard_batch_cost,
    shard_seq_cost,
    simulate,
    slice_batch_cost,
    slice_seq_cost,
    split_train_test,
    train,
    uniform_partition,
    unlearn,
    validate_formulas,
)

__all__ = [
    "DataPoint",
    "Dataset",
    "Model",
    "PartitionPlan",
    "SisaError",
    "assign_probs",
    "combined_report",
    "distribution_aware_shard",
    "evaluate",
    "gen_synthetic",
    "load_csv",
    "load_model",
    "predict",
    "save_csv",
    "save_model",
    "shard_batch_cost",
    "shard_seq_cost",
    "simulate",
    "slice_batch_cost",
    "slice_seq_cost",
    "split_train_test",
    "train",
    "uniform_partition",
    "unlearn",
    "validate_formulas",
]
