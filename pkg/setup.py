from os.path import exists

from setuptools import find_packages, setup

if exists("README.rst"):
    with open("README.rst") as f:
        long_description = f.read()
else:
    long_description = ""

with open("requirements.txt") as f:
    install_requires = f.read().strip().split("\n")

CLASSIFIERS = [
    "Development Status :: 4 - Beta",
    "License :: OSI Approved :: MIT License",
    "Operating System :: OS Independent",
    "Intended Audience :: Science/Research",
    "Intended Audience :: Education",
    "Natural Language :: English",
    "Programming Language :: Python :: 3 :: Only",
    "Programming Language :: Python :: 3.9",
    "Programming Language :: Python :: 3.10",
    "Programming Language :: Python :: 3.11",
    "Topic :: Scientific/Engineering",
    "Topic :: System :: Networking",
]

extras_require = {
    "progress": ["tqdm"],
}
extras_require["complete"] = sorted({v for req in extras_require.values() for v in req})
# after complete is set, add in test
extras_require["test"] = [
    "pytest",
    "pytest-cov",
    "pytest-xdist",
    "hypothesis",
]
extras_require["bench"] = ["asv"]

setup(
    description="Throughput of asynchronous Aloha networks with half- and "
    "full-duplex clusters.",
    install_requires=install_requires,
    python_requires=">=3.9",
    license="MIT",
    long_description=long_description,
    classifiers=CLASSIFIERS,
    name="fdaloha",
    packages=find_packages(),
    test_suite="fdaloha/tests",
    tests_require=["pytest"],
    use_scm_version={"version_scheme": "post-release", "local_scheme": "dirty-tag"},
    zip_safe=False,
    extras_require=extras_require,
    entry_points={"console_scripts": ["fdaloha=fdaloha.cli:main"]},
)
