"""
Paquete de pruebas
"""
