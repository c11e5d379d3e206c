"""
Paquete del simulador de flujo de arranque en tubería para fluidos de Maxwell fraccionarios
"""

__version__ = "1.0.0"
