# Reports module
from .writer import abrir_saida, render_csv, render_json, gravar_relatorio
