"""Line-drawing guided two-stage mural inpainting toolkit."""

__version__ = "0.1.0"
