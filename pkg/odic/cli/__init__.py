from odic.cli.app import EXIT_DATA, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, app, main
from odic.cli.plot import emit_rd_plot, render_rd_plot

__all__ = ("EXIT_DATA", "EXIT_INTERNAL", "EXIT_OK", "EXIT_USAGE", "app", "main", "emit_rd_plot", "render_rd_plot")
