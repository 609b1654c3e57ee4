"""Next-destination prediction with a sliding-window LSTM, end to end."""

from .core import CityVocab, CustomerHistory, RawTrip, Trip, build_vocab
from .datagen import GenConfig, generate, read_csv, write_csv
from .pipeline import (
    CustomFeatures,
    EncodedEntry,
    Preprocessor,
    WindowEntry,
    build_dataset,
    clean,
    filter_min_trips,
    fit_preprocessor,
    split_train_test,
    window_customer,
)
from .model import Hyperparams, TrainedModel, forward, load, predict_proba, save, train
from .analysis import (
    AnovaTable,
    GridConfig,
    ResultsGrid,
    anova,
    run_grid,
    topn_f1,
    topn_recall,
    tukey,
)

__version__ = "0.1.0"

__all__ = [
    "AnovaTable",
    "CityVocab",
    "CustomFeatures",
    "CustomerHistory",
    "EncodedEntry",
    "GenConfig",
    "GridConfig",
    "Hyperparams",
    "Preprocessor",
    "RawTrip",
    "ResultsGrid",
    "TrainedModel",
    "Trip",
    "WindowEntry",
    "anova",
    "build_dataset",
    "build_vocab",
    "clean",
    "filter_min_trips",
    "fit_preprocessor",
    "forward",
    "generate",
    "load",
    "predict_proba",
    "read_csv",
    "run_grid",
    "save",
    "split_train_test",
    "topn_f1",
    "topn_recall",
    "train",
    "tukey",
    "window_customer",
    "write_csv",
]
