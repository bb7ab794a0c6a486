import setuptools

VERSION = "0.1.0"
PACKAGE_DIR = "src"
REQUIREMENTS_FILE = PACKAGE_DIR + "/requirements.txt"
README = "README.md"

with open(REQUIREMENTS_FILE, "r") as f:
    requirements = f.read().splitlines()

with open(README, "r") as file:
    try:
        long_description = file.read()
    except OSError:
        long_description = "Reading README failed"

setuptools.setup(
    name="bipolar_blowup",
    version=VERSION,
    description="Exact and asymptotic solvers for gradient blow-up between a nearly touching disk inclusion and "
                "its container.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(where=PACKAGE_DIR),
    package_dir={"": PACKAGE_DIR},
    classifiers=[
        "Programming Language :: Python :: 3.10",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.8',
    keywords=[
        "python",
        "bipolar coordinates",
        "transmission problem",
        "conductivity",
        "gradient blow-up",
        "image charges",
        "lerch transcendent",
    ],
    install_requires=requirements,
    extras_require={"test": ["pytest>=7.0"]},
    entry_points={"console_scripts": ["bipolar-blowup=bipolar_blowup.harness:main"]},
)
