import numpy as np
import pytest
import sasaki.zoo

SEED = 7
COUNT = 3


@pytest.fixture(scope='module', params=[1, 2, 3])
def sasakian(request):
    return sasaki.zoo.get_model('darboux-sasakian:%d' % request.param)

@pytest.fixture(scope='module', params=['-', '+-'])
def pseudo(request):
    signs = request.param
    return sasaki.zoo.get_model('darboux-pseudo:%d:%s' % (len(signs), signs))

@pytest.fixture(scope='module')
def s5():
    return sasaki.zoo.get_model('s5-nearly-sasakian')

@pytest.fixture(scope='module')
def perturbed():
    return sasaki.zoo.get_model('darboux-perturbed:2')

@pytest.fixture(scope='module')
def rng():
    return np.random.default_rng(SEED)

@pytest.fixture(scope='module')
def environ():
    return {
        'SASAKI_PROGRESS': '0',
        'SASAKI_POINTS': str(COUNT)
    }
