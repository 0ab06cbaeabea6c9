"""twistorflow: exact verification engine and flow laboratory for
twistor-space metric families of positive quaternion Kahler manifolds."""

__version__ = "0.1.0"
