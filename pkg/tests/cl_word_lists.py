"""Frozen reference word lists for the gate-pair problem, length <= 8.

Cross-checked in two independent ways: the exact six-state orbit table and
direct unitary simulation (see test_problems).
"""

ACCEPT_WORDS = [
    '', 'hh', 'hsh', 'shs', 'hssh', 'hhhh', 'ssss', 'hhhsh', 'hhshs', 'hshhh', 'shhhs',
    'shshh', 'hsssh', 'hshhsh', 'shhsss', 'hhhhhh', 'sshhss', 'sssshh', 'hhhssh', 'hshshs',
    'hhssss', 'ssshhs', 'hssssh', 'hsshhh', 'shshsh', 'shsshs', 'shshhhh', 'hhhhhsh',
    'hssshhh', 'sshshss', 'ssssshs', 'hhshshh', 'shsssss', 'hshssss', 'shshssh', 'hhhsssh',
    'hsssssh', 'hhhshhh', 'hhhhshs', 'hsshhsh', 'hsshshs', 'ssshsss', 'hhshhhs', 'shhhshh',
    'hshhhhh', 'hshhssh', 'sssshsh', 'shhhhhs', 'ssshhshh', 'shhhshsh', 'shshshhh', 'sshhshhs',
    'sssshhhh', 'shhhsshs', 'hshhshhh', 'hshshshh', 'hssshhsh', 'hshhsssh', 'shhhhsss',
    'shsshshh', 'shhssshh', 'hshhhshs', 'ssshhhhs', 'shsshhhs', 'hhhhhssh', 'hshshhhs',
    'sssshssh', 'sshsshss', 'hhshshsh', 'hssssssh', 'hhshhsss', 'shhshhss', 'hhsssshh',
    'hhhshshs', 'hssshshs', 'hsssshhh', 'hhssshhs', 'sshhhhss', 'ssssssss', 'shhsshhs',
    'shshsssh', 'hsshhhhh', 'hhshsshs', 'hhhhhhhh', 'shshhshs', 'shshhhsh', 'hhhsshhh',
    'hshhhhsh', 'hhhshhsh', 'hsshhssh', 'hsshssss', 'sshhsshh', 'hhhhssss', 'hhhssssh',
    'hhsshhss',
]

REJECT_WORDS = [
    'ss', 'shhs', 'hhss', 'sshh', 'sshsh', 'ssshs', 'shsss', 'hshss', 'sshssh', 'hsshss',
    'shhshh', 'sshhhh', 'hhhhss', 'hhsshh', 'ssssss', 'hhshhs', 'shhhhs', 'ssshhhs', 'hhhshss',
    'shhhsss', 'hhshsss', 'hhssshs', 'shsshhs', 'hshhhss', 'shhshsh', 'sshhhsh', 'shshhss',
    'sshhshs', 'hshshhs', 'hssshss', 'sshshhh', 'hshsshh', 'shssshh', 'hhsshsh', 'ssshshh',
    'sshsssh', 'shhsshs', 'hhsshssh', 'sshhhhhh', 'ssshhsss', 'hhssssss', 'hshssshs',
    'hsshsshh', 'shhshssh', 'hhsshhhh', 'sshshhsh', 'shhhhshh', 'hhhhhhss', 'ssshshsh',
    'sshssssh', 'hsshhhss', 'hhhsshss', 'shhhhhhs', 'hhhhsshh', 'shsshsss', 'sshsshhh',
    'hshsshsh', 'sshhssss', 'sshshshs', 'hsshshhs', 'hhshhshh', 'sshhhssh', 'hhhhshhs',
    'shhsssss', 'ssshsshs', 'ssssshhs', 'sssshhss', 'shsssshs', 'shshshss', 'shssshsh',
    'hhshhhhs', 'sssssshh', 'hsssshss', 'hshhshss', 'hshshsss', 'shhshhhh',
]
