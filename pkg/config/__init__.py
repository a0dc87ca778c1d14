# Config module: constantes e tolerâncias lidas do ambiente
