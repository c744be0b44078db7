from typing import Tuple, Type, Union

from ..exceptions import NLSLabError


class Failures(NLSLabError):
    """
    Several failures that occurred independently of each other

    :ivar children: the individual exceptions, in the order of their activities

    Raised by :py:func:`~nlslab._concurrent.basics.collect` and the
    acceptance suite, which both run every activity to completion instead
    of stopping at the first failure. Use :py:meth:`~.matching` to handle
    specific kinds of failures:

    .. code:: python3

        try:
            collect(*rows)
        except Failures as err:
            for blowup in err.matching(NumericalBlowup):
                print('row blew up at', blowup.time)
    """
    children: 'Tuple[Union[Failures, Exception], ...]'

    def __init__(self, *children: 'Union[Failures, Exception]'):
        assert children, 'Failures requires at least one child'
        super().__init__(children)
        self.children = children

    def matching(self, kind: Type[Exception]) -> Tuple[Exception, ...]:
        """All leaf failures that are instances of ``kind``"""
        return tuple(
            child for child in self.flattened().children if isinstance(child, kind)
        )

    def flattened(self) -> 'Failures':
        """
        Collapse nested :py:class:`~.Failures`

        Flattening ``Failures(Failures(KeyError()), IndexError())`` provides
        ``Failures(KeyError(), IndexError())``.
        """
        if not any(isinstance(exc, Failures) for exc in self.children):
            return self
        leafs = []
        for child in self.children:
            if isinstance(child, Failures):
                leafs.extend(child.flattened().children)
            else:
                leafs.append(child)
        flat = Failures(*leafs)
        flat.__cause__ = self.__cause__
        flat.__context__ = self.__context__
        return flat

    def __str__(self):
        return '%d failures: %s' % (
            len(self.children), '; '.join(map(str, self.children))
        )

    def __repr__(self):
        return '<%s of %s>' % (
            self.__class__.__name__, ', '.join(map(repr, self.children))
        )
