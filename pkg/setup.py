#!/usr/bin/env python

import os

import setuptools


def read(filename):
    return open(os.path.join(os.path.dirname(__file__), filename)).read()


setuptools.setup(
    name='reliefscan',
    version=read('VERSION').strip(),
    description='Topographic ink detection experiments on papyrus heightmaps',
    long_description=read('README.md'),
    long_description_content_type='text/markdown',
    license='Apache License 2.0',
    packages=setuptools.find_packages(exclude=['tests']),
    install_requires=[
        'blinker',
        'click',
        'Flask>=2.0',
        'numpy>=1.22',
        'opencv-python-headless',
        'pyparsing',
        'PyYAML',
        'scipy',
    ],
    include_package_data=True,
    zip_safe=False,
    entry_points={
        'console_scripts': [
            'reliefscan = reliefscan.commands:cli'
        ],
        'reliefscan.segmenters': [
            'logistic = reliefscan.segment.logistic:LogisticSegmenter',
            'roughness = reliefscan.segment.roughness:RoughnessSegmenter'
        ]
    },
    keywords='papyrus heightmap segmentation ink detection resolution',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Environment :: Plugins',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Image Recognition',
    ],
    python_requires='>=3.10'
)
