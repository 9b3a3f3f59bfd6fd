#!/usr/bin/env python

"""The setup script."""

from setuptools import setup, find_packages

with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()

requirements = [
        'Click>=7.1',
        'python-dotenv>=0.19.2',
        'tabulate>=0.8.9',
        'pandas>=1.3',
        'jinja2>=3.0.3',
        'numpy>=1.20',
        ]

test_requirements = ['scipy>=1.7', ]

setup(
    author="Mick Boekhoff",
    author_email='mickboekhoff@hotmail.com',
    python_requires='>=3.9',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Text Processing :: Linguistic',
    ],
    description="Collapse multiword expressions in a CCG treebank and measure what it does to parsing.",
    entry_points={
        'console_scripts': [
            'ccgmwe=ccgmwe.cli:main',
        ],
    },
    install_requires=requirements,
    license="MIT license",
    long_description=readme + '\n\n' + history,
    include_package_data=True,
    package_data={'ccgmwe': ['presets/*.env', 'templates/*.txt', 'data/*']},
    keywords='ccgmwe ccg multiword-expressions parsing',
    name='ccgmwe',
    packages=find_packages(include=['ccgmwe', 'ccgmwe.*']),
    test_suite='tests',
    tests_require=test_requirements,
    url='https://github.com/mickboekhoff/ccgmwe',
    version='0.1.0',
    zip_safe=False,
)
