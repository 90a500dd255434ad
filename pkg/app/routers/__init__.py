import logging

from app.routers import autgroup, construct, normalizer, realize, simplicity, tensors, verify

log = logging.getLogger("routers")

ROUTERS = (realize, construct, verify, autgroup, simplicity, normalizer, tensors)


def register_all(subparsers) -> None:
    for module in ROUTERS:
        module.register(subparsers)
        log.debug("Loaded router: %s", module.__name__.rsplit(".", 1)[-1])
