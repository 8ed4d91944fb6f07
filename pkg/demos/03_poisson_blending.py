"""Seamless cloning: splice one image's gradients into another and solve.

Copying pixels leaves a visible rectangle; copying *gradients* and solving
the spliced field back lets the pasted region inherit the destination's
lighting, so the seam disappears.  The blend region may cross strong
destination edges, the whole frame participates in the solve.
"""

import numpy as np

from _shared import ensure_output_dir, photo_like, structured_scene
from gfc import BlendJob, MultiChannelImage, poisson_blend
from gfc.image_io import write_image

out_dir = ensure_output_dir()

destination = photo_like(120, 160, seed=11)
source = structured_scene(64, 72, seed=12) * 0.7 + 40  # darker stamp to clone
source = np.round(np.clip(source, 0, 255))

offset = (30, 44)  # where the stamp lands in the destination frame
mask = np.zeros_like(destination)
mask[offset[0] + 6:offset[0] + 58, offset[1] + 6:offset[1] + 66] = 1.0

write_image(out_dir / "blend_destination.png", MultiChannelImage((destination,)))
write_image(out_dir / "blend_source.png", MultiChannelImage((source,)))

# naive cut-and-paste, for comparison
pasted = destination.copy()
sel = mask == 1
src_canvas = np.zeros_like(destination)
src_canvas[offset[0]:offset[0] + 64, offset[1]:offset[1] + 72] = source
pasted[sel] = src_canvas[sel]
write_image(out_dir / "blend_pasted.png", MultiChannelImage((pasted,)))

job = BlendJob(
    source=MultiChannelImage((source,)),
    destination=MultiChannelImage((destination,)),
    mask=mask,
    offset=offset,
)
blended = poisson_blend(job)
write_image(out_dir / "blend_result.png", MultiChannelImage(blended.channels))

# the seam: largest jump across the mask boundary, inside vs just outside
boundary = (mask == 1) & (
    np.roll(mask, 1, 0) + np.roll(mask, -1, 0) + np.roll(mask, 1, 1) + np.roll(mask, -1, 1) < 4
)


def seam_step(img):
    steps = []
    for axis, shift in ((0, 1), (0, -1), (1, 1), (1, -1)):
        neighbor = np.roll(img, shift, axis)
        outside = np.roll(mask, shift, axis) == 0
        sel_b = boundary & outside
        if sel_b.any():
            steps.append(np.abs(img - neighbor)[sel_b].max())
    return max(steps)


print(f"max step across the paste boundary, cut-and-paste: {seam_step(pasted):6.1f} gray levels")
print(f"max step across the paste boundary, gradient blend: {seam_step(blended.channels[0]):6.1f}")
print(f"destination's own step along that contour (baseline): {seam_step(destination):6.1f}")
print(f"outputs in {out_dir}")
