from typing import TYPE_CHECKING

from odic.events import ListenerRegistry

if TYPE_CHECKING:
    from odic.codec.bitstream import Bitstream
    from odic.codec.typing import RdPoint
    from odic.rasters import ErpImage

_CODEC_LISTENERS: ListenerRegistry["CodecListener"] = ListenerRegistry()


class CodecListener:
    def on_encoded(self, bitstream: "Bitstream") -> None:
        ...

    def on_decoded(self, bitstream: "Bitstream", image: "ErpImage") -> None:
        ...

    def on_rd_point(self, point: "RdPoint") -> None:
        ...


def register_codec_listener(listener: CodecListener) -> None:
    """
    Register a listener that will dispatch on every codec call in the system
    """
    global _CODEC_LISTENERS

    _CODEC_LISTENERS.register(listener)


def unregister_codec_listener(listener: CodecListener) -> None:
    global _CODEC_LISTENERS

    _CODEC_LISTENERS.unregister(listener)
