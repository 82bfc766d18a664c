from setuptools import find_packages, setup

setup(
    name="crossdep",
    version="0.1.0",
    description="Smart-home and ICT ontologies, cross-domain dependency queries and an occupancy-driven energy simulator.",
    package_dir={"": "src"},
    packages=find_packages("src"),
    package_data={"crossdep": ["data/seeds/*", "data/rules/*", "data/scenarios/*"]},
    python_requires=">=3.8",
    install_requires=["networkx>=2.8", "numpy>=1.22"],
    entry_points={"console_scripts": ["crossdep=crossdep.cli:main"]},
)
