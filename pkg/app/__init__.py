"""Garside germ toolkit: germs, normal forms, homology and the geometry of Garside groups"""
