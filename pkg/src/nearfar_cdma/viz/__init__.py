from .plot import plot_figure, plot_spectrum, plot_sweep_csv

__all__ = ["plot_figure", "plot_spectrum", "plot_sweep_csv"]
