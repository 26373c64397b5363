from typing import Optional

from rich.progress import Progress, TaskID

from odic.codec import CodecListener, RdPoint


class SweepProgress(CodecListener):
    """
    Advances a rich progress bar on every finished operating point
    """

    def __init__(self, progress: Progress, task: TaskID) -> None:
        self._progress = progress
        self._task = task
        self.last_point: Optional[RdPoint] = None

    def on_rd_point(self, point: RdPoint) -> None:
        self.last_point = point
        self._progress.update(
            self._task,
            advance=1,
            description=f"{point.image or 'image'}: lambda {point.lambda_:g} -> {point.bpp:.3f} bpp",
        )
