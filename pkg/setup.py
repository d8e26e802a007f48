from setuptools import find_packages, setup

setup(
    name='thz-hybrid-beamforming',
    version='0.1.0',
    description='Terahertz ultra-massive MIMO hybrid beamforming simulator',
    packages=find_packages(include=['src', 'src.*']),
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.19.0',
        'scipy>=1.7.0',
        'pandas>=1.1.0',
    ],
    extras_require={
        'dev': ['pytest>=6.0.1', 'flake8>=3.8.3', 'black>=19.10b0'],
    },
    entry_points={
        'console_scripts': ['thz-hbf=src.main:main'],
    },
)
