from django.apps import AppConfig


class HopfActionConfig(AppConfig):
    name = 'app'
    verbose_name = 'Inner actions of pointed Hopf algebras'
