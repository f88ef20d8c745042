# abelorbits package: B-orbits in abelian nilradicals of classical Lie algebras
