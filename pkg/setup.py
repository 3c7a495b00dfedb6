import os
from setuptools import setup

def read(name):
    return open(os.path.join(os.path.dirname(__file__), name)).read()

setup(
    name='python-sasaki',
    version='1.0.0',
    description="Numerical verification of nearly Sasakian tensor identities",
    long_description=read('README.rst'),
    keywords='sasakian contact metric tensor differential geometry',
    license='MIT',
    packages=['sasaki'],
    entry_points={'console_scripts': ['sasaki=sasaki.main:main']},
    install_requires=['numpy>=1.17.0',
                      'tqdm>=3.1.4']
)
