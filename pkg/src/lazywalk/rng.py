"""Counter-based random streams.

All Monte Carlo code draws from Philox4x64 streams addressed by
(seed, stream, substream).  Philox is counter-based and platform
independent, so stream (seed, j, k) yields the same numbers on every
machine and under any execution schedule.  Trajectory-parallel drivers
give each trajectory (or each fixed-size chunk) its own stream.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def philox_stream(seed: int, stream: int = 0, substream: int = 0) -> np.random.Generator:
    """Independent generator for (seed, stream, substream).

    The 128-bit Philox key carries (seed, stream); the substream offsets
    the 256-bit counter so substreams of one key never overlap.
    """
    key = (seed & _MASK64) | ((stream & _MASK64) << 64)
    bitgen = np.random.Philox(key=key)
    if substream:
        bitgen.advance((substream & _MASK64) << 128)
    return np.random.Generator(bitgen)


def fresh_seed() -> int:
    """A 63-bit seed from OS entropy, for runs that did not pin one."""
    return int(np.random.SeedSequence().entropy) & (_MASK64 >> 1)
