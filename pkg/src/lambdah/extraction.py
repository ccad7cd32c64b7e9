"""Extraction: erase the head constant H from operator position.

``extract`` is the homomorphic map that deletes every H standing at the
head of an iterated application::

    E(x)            = x
    E(H)            = H
    E(lam x. U)     = lam x. E(U)
    E(U V)          = E(U) E(V)        if the application head of U V is not H
    E(H U1 .. Un)   = E(U1 U2 .. Un)   for n >= 1

The side condition is decided on the application spine only: binders are
never stripped while looking for the head, so a bare H (no arguments) is
kept while an applied H disappears and its first argument takes over as
operator.  The map is idempotent, and its image never contains an
application whose operator spine ends in H; consequently every image has
one of exactly three shapes, classified by ``classify``.
"""

from __future__ import annotations

from enum import Enum

from .terms import (
    Abs,
    App,
    ConstH,
    HeadH,
    HeadRedex,
    HeadVar,
    Term,
    app_head,
    apply_args,
    spine,
    unwind_app,
)


def extract(t: Term) -> Term:
    match t:
        case App(fun, arg):
            if isinstance(app_head(t), ConstH):
                # t = H U1 .. Un with n >= 1: drop the H and extract what is left
                _, args = unwind_app(t)
                return extract(apply_args(args[0], args[1:]))
            return App(extract(fun), extract(arg))
        case Abs(body):
            return Abs(extract(body))
        case _:
            return t


class EShape(Enum):
    """The three possible shapes of an extraction image.

    LAMBDA_H:          lam x1 .. xn. H            (bare H head, no arguments)
    LAMBDA_VAR_APPS:   lam x1 .. xn. x V1 .. Vk   (head variable)
    LAMBDA_REDEX_APPS: lam x1 .. xn. (lam x. U) V V1 .. Vk  (head beta redex)
    """

    LAMBDA_H = "lambda_h"
    LAMBDA_VAR_APPS = "lambda_var_apps"
    LAMBDA_REDEX_APPS = "lambda_redex_apps"


class ShapeViolation(Exception):
    """An alleged extraction image has an applied H at its head."""

    def __init__(self, t: Term):
        super().__init__(f"applied H at the head of an extraction image: {t!r}")
        self.term = t


def classify(image: Term) -> EShape:
    view = spine(image)
    match view.head:
        case HeadVar(_):
            return EShape.LAMBDA_VAR_APPS
        case HeadRedex(_, _):
            return EShape.LAMBDA_REDEX_APPS
        case HeadH():
            if view.args:
                raise ShapeViolation(image)
            return EShape.LAMBDA_H


def has_applied_h(t: Term) -> bool:
    """True if any application node's operator spine ends in H.

    Extraction images must answer False everywhere, not just at the
    root; H may survive extraction only in argument position.
    """
    match t:
        case App(fun, arg):
            if isinstance(app_head(fun), ConstH):
                return True
            return has_applied_h(fun) or has_applied_h(arg)
        case Abs(body):
            return has_applied_h(body)
        case _:
            return False
