"""
Flujo de arranque en tubería de un fluido de Maxwell fraccionario
Archivo principal para ejecutar la aplicación
"""

from src.cli import main

if __name__ == "__main__":
    main()
