"""Shared helpers and operator scripts for roughreg"""
from .fitting import LogLogFit, loglog_fit
from .tables import read_csv, read_json, write_csv, write_json

__all__ = ['LogLogFit', 'loglog_fit', 'read_csv', 'read_json', 'write_csv', 'write_json']
