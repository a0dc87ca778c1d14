# Modules: funções especiais, Hermite, potenciais, resolvedor espectral e desigualdades
