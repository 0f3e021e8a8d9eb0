from .plots import EmptyDataset, MissingColumn, PlotSpec, render

__all__ = ["EmptyDataset", "MissingColumn", "PlotSpec", "render"]
