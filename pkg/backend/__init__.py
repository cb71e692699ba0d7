"""Read-only HTTP API for exponents, presets and runs"""
