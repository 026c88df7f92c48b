"""Figure renderers for gatequiz CSV outputs.

Read-only over the CSVs: every physics number (failure probabilities,
infidelities, classical floors, slopes) comes from the primary tool; this
package only draws.
"""

__version__ = "0.1.0"

from .render import FigureSpec, render_noise_curves, render_survey

__all__ = ["FigureSpec", "render_survey", "render_noise_curves"]
