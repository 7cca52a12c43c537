"""`ghx` decides global hypoellipticity of left-invariant systems on T^r and SU(2) at finite
resolution"""
__version__ = "0.1.0"
