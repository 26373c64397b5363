import logging
from typing import Callable, Generic, List, Optional, Sequence, TypeVar, cast

ListenerT = TypeVar("ListenerT")

logger = logging.getLogger("odic.events")


class ListenerRegistry(Generic[ListenerT]):
    """
    A listener registry that helps to register component-wide listeners
    """

    def __init__(self) -> None:
        self._listeners: list[ListenerT] = []

    @property
    def listeners(self) -> list[ListenerT]:
        return self._listeners

    def register(self, listener: ListenerT) -> None:
        self._listeners.append(listener)

    def unregister(self, listener: ListenerT) -> None:
        self._listeners.remove(listener)


class EventDispatcher(Generic[ListenerT]):
    """
    Dispatches local listeners first, then the global ones, in registration order.
    A failing listener is logged and skipped, it never reaches the caller
    """

    def __init__(
        self,
        local_listeners: Optional[Sequence[ListenerT]] = None,
        global_listener_registry: Optional[ListenerRegistry[ListenerT]] = None,
    ) -> None:
        self._local_listeners = list(local_listeners or [])
        self._global_listener_registry = global_listener_registry

    @property
    def as_listener(self) -> ListenerT:
        return cast(ListenerT, self)

    def _listeners(self) -> List[ListenerT]:
        global_listeners = self._global_listener_registry.listeners if self._global_listener_registry else []

        return [*self._local_listeners, *global_listeners]

    def __getattr__(self, event_handler_name: str) -> Callable[..., None]:
        if event_handler_name.startswith("_"):
            raise AttributeError(event_handler_name)

        def handle_event(*args, **kwargs) -> None:
            for listener in self._listeners():
                handler = getattr(listener, event_handler_name, None)

                if handler is None:
                    continue

                try:
                    handler(*args, **kwargs)
                except Exception:
                    logger.exception("Listener %r failed on %s", listener, event_handler_name)

        return handle_event
