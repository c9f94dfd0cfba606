"""BitAssist - one-shot single-bit channel coding with assistance"""
__version__ = "1.0.0"
