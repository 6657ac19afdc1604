import numpy as np

from lumaforge import ColorBuffer, PixelBuffer


def block_texture(seed: int, rows: int = 144, cols: int = 176, block: int = 8) -> PixelBuffer:
    """Seeded piecewise-constant texture: a coarse random grid upsampled by block.

    Spatially smooth enough that neighborhood filtering is meaningful (an iid
    noise frame has no structure for a median filter to preserve).
    """
    rng = np.random.default_rng(seed)
    coarse_shape = ((rows + block - 1) // block, (cols + block - 1) // block)
    coarse = rng.integers(0, 256, size=coarse_shape, dtype=np.uint8)
    upsampled = np.kron(coarse, np.ones((block, block), dtype=np.uint8))
    return PixelBuffer(upsampled[:rows, :cols])


def color_block_texture(seed: int, rows: int = 144, cols: int = 176, block: int = 8) -> ColorBuffer:
    return ColorBuffer.from_planes(
        block_texture(seed * 3 + 0, rows, cols, block),
        block_texture(seed * 3 + 1, rows, cols, block),
        block_texture(seed * 3 + 2, rows, cols, block),
    )
