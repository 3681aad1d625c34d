import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="minsir",
    version="0.1.0",
    author="dropickdev",
    author_email="enchance@gmail.com",
    description="Exact and extreme-value statistics of the minimum SIR under kappa-mu shadowed "
                "fading, with underlay cognitive-radio power and multicast-rate tools.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/dropkickdev/minsir.git",
    packages=setuptools.find_packages(exclude=['examples', 'examples.*']),
    install_requires=['numpy>=1.22', 'scipy>=1.9', 'pydantic>=2.0'],
    extras_require={
        'test': ['pytest'],
        'docs': ['mkdocs-material', 'markdown-include'],
    },
    entry_points={
        'console_scripts': ['minsir=minsir.cli:main'],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.11',
)
