import sys
import os
import setuptools

from setuptools.command.install import install

version='0.1.0'

with open("README.md", "r") as f:
  long_description = f.read()

class VerifyVersionCommand(install):
    """Custom command to verify that the git tag matches our version"""
    description = 'verify that the git tag matches our version'

    def run(self):
        tag = os.getenv('CIRCLE_TAG')

        if tag != version:
            info = f"Git tag: {tag} does not match the version of this app: {version}"
            sys.exit(info)

setuptools.setup(
  name='qtomo',
  version=version,
  python_requires='>=3.7, <4',
  install_requires=[
    'enlighten',
    'importlib-metadata ~= 1.0 ; python_version < "3.8"',
    'numpy >= 1.17',
    'scipy >= 1.8',
    'send2trash',
    'xxhash',
  ],
  extras_require={
    'dev': [
      'bump2version',
      'pytest',
      'sphinx',
      'sphinx-jekyll-builder'
    ]
  },
  entry_points ={
    'console_scripts': [
      'qtcli = qtomo.qtcli:main'
    ]
  },
  classifiers=[
    'Development Status :: 3 - Alpha',
    'Intended Audience :: Science/Research',
    'Topic :: Scientific/Engineering :: Physics',
    'Topic :: Software Development :: Libraries',
    'License :: OSI Approved :: MIT License',
    'Programming Language :: Python :: 3.7',
    'Programming Language :: Python :: 3.8',
    'Programming Language :: Python :: 3.9',
  ],
  description='Optical tomograms, characteristic and Wigner functions of quantum states on sampled grids',
  long_description=long_description,
  long_description_content_type='text/markdown',
  packages=setuptools.find_packages(exclude=['tests', 'examples', 'examples.*']),
  license='MIT',
  cmdclass={
    'verify': VerifyVersionCommand,
  }
)
